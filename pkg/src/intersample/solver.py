"""Branch-and-bound maximization of a facet objective to eps-optimality.

The solver maintains a list of time-subinterval nodes.  Each sweep computes
certified derivative ranges for every fresh node and classifies it:

  * f' >= 0 certified  -> maximum at the right endpoint (point bound);
  * f' <= 0 certified  -> maximum at the left endpoint;
  * f'' >= 0 certified -> f convex, maximum at an endpoint;
  * f'' <= 0 certified -> f concave, maximize directly (one convex OP);
  * otherwise          -> concave overestimator certificate.

After every sweep the incumbent lower bound is the best objective value seen
at a certified point; the upper bound is the largest node bound.  Nodes whose
bound cannot beat the incumbent are dropped (unless already converged, so the
winning node always survives), and the node with the widest bound gap is
bisected, first-created first on ties.  Certified termination with
gap <= epsilon is the normal exit; budget and width floors return the bounds
reached so far with an honest status.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .facet import (
    AnalyticCase,
    CaseKind,
    FacetProblem,
    derivative_inclusions,
    detect_analytic_case,
    eval_f,
    eval_f_prime,
    solve_eigenvector_case,
)
from .intervals import Interval, IntervalMatrix
from .matexp import ExpParams
from .overestimators import (
    OverestimatorKind,
    bound_for,
    concave_max,
    concave_value_pad,
    default_tol_t,
)

__all__ = [
    "SolveStatus",
    "SolverConfig",
    "SolveReport",
    "TraceEvent",
    "ConfigInvalid",
    "solve",
    "solve_with_trace",
]


class ConfigInvalid(ValueError):
    """Solver configuration rejected before any work was done."""


class SolveStatus(Enum):
    EPS_OPTIMAL = "eps_optimal"
    BUDGET_EXHAUSTED = "budget_exhausted"
    WIDTH_FLOOR = "width_floor"


@dataclass(frozen=True)
class SolverConfig:
    """Tolerance, enclosure parameters, shape selection, and safety floors.

    min_t_width of None means 2^-40 times the horizon, resolved at solve
    time; an explicit value is taken as an absolute width.
    """

    epsilon: float = 1e-6
    k: int = 10
    l: int = 10
    overestimator: OverestimatorKind = OverestimatorKind.PIECEWISE_QUADRATIC
    max_bisections: int = 100_000
    min_t_width: float | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.epsilon, float) and self.epsilon > 0.0):
            raise ConfigInvalid("epsilon must be a positive float")
        if not isinstance(self.overestimator, OverestimatorKind):
            raise ConfigInvalid("overestimator must be an OverestimatorKind")
        if not (isinstance(self.max_bisections, int) and self.max_bisections >= 0):
            raise ConfigInvalid("max_bisections must be a nonnegative integer")
        if self.min_t_width is not None and not (self.min_t_width > 0.0):
            raise ConfigInvalid("min_t_width must be positive when given")
        try:
            ExpParams(self.k, self.l)
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from None

    @property
    def exp_params(self) -> ExpParams:
        return ExpParams(self.k, self.l)


@dataclass(frozen=True)
class SolveReport:
    """Certified bounds and accounting for one facet solve."""

    f_upper: float
    f_lower: float
    gap: float
    bisections: int
    convex_ops: int
    nodes_final: int
    status: SolveStatus
    witness_t: float
    analytic_case: AnalyticCase
    wall_time_s: float


@dataclass(frozen=True)
class TraceEvent:
    """One solver event: a processed node, or a sweep bound summary."""

    kind: str  # "node" or "sweep"
    seq: int
    t_lo: float | None = None
    t_hi: float | None = None
    branch: str | None = None
    f_prime: tuple[float, float] | None = None
    f_second: tuple[float, float] | None = None
    f_dagger: tuple[float, float] | None = None
    t_dagger: float | None = None
    overestimator: dict | None = None
    f_lower: float | None = None
    f_upper: float | None = None


@dataclass
class _Node:
    t: Interval
    f_dagger: Interval = field(default_factory=Interval.unbounded)
    seq: int = 0

    @property
    def fresh(self) -> bool:
        return self.f_dagger.is_unbounded


class _PointCache:
    """Memoized objective and slope evaluations keyed by the time point.

    Bisection midpoints are shared by siblings and reused across sweeps, so
    caching roughly halves the endpoint evaluations.
    """

    def __init__(self, p: FacetProblem):
        self._p = p
        self._f: dict[float, float] = {}
        self._fp: dict[float, float] = {}

    def f(self, t: float) -> float:
        val = self._f.get(t)
        if val is None:
            val = eval_f(self._p, t)
            self._f[t] = val
        return val

    def f_prime(self, t: float) -> float:
        val = self._fp.get(t)
        if val is None:
            val = eval_f_prime(self._p, t)
            self._fp[t] = val
        return val


def solve(p: FacetProblem, cfg: SolverConfig = SolverConfig()) -> SolveReport:
    return _run(p, cfg, trace=None)


def solve_with_trace(
    p: FacetProblem, cfg: SolverConfig = SolverConfig()
) -> tuple[SolveReport, list[TraceEvent]]:
    """solve plus the per-node classification events behind the run."""
    events: list[TraceEvent] = []
    report = _run(p, cfg, trace=events)
    return report, events


def _horizon_check(p: FacetProblem, cfg: SolverConfig) -> None:
    horizon = IntervalMatrix.from_point(p.A).scale(Interval(0.0, p.dt))
    norm = horizon.inf_norm_upper()
    if not (2.0**cfg.l * (cfg.k + 2) > norm):
        needed_l = 0
        while 2.0**needed_l * (cfg.k + 2) <= norm:
            needed_l += 1
        raise ConfigInvalid(
            f"2^l (k+2) must exceed the horizon norm {norm!r}; "
            f"need l >= {needed_l} at k = {cfg.k}"
        )


def _run(p: FacetProblem, cfg: SolverConfig, trace: list[TraceEvent] | None) -> SolveReport:
    start = time.perf_counter()
    params = cfg.exp_params
    _horizon_check(p, cfg)

    min_t_width = cfg.min_t_width
    if min_t_width is None:
        min_t_width = 2.0**-40 * p.dt

    case = detect_analytic_case(p)
    if case.kind is CaseKind.CONSTANT:
        value = float(p.h @ p.x0)
        return _report(value, value, 0, 0, 0, SolveStatus.EPS_OPTIMAL, 0.0, case, start)
    if case.kind is CaseKind.EIGENVECTOR:
        value, arg = solve_eigenvector_case(p, case)
        return _report(value, value, 0, 0, 0, SolveStatus.EPS_OPTIMAL, arg, case, start)

    cache = _PointCache(p)
    tol_t = default_tol_t(p.dt)
    nodes: list[_Node] = [_Node(Interval(0.0, p.dt), seq=0)]
    next_seq = 1
    sweep_seq = 0
    f_lower = float(p.h @ p.x0)
    witness_t = 0.0
    bisections = 0
    convex_ops = 0

    while True:
        for node in nodes:
            if not node.fresh:
                continue
            f_prime, f_second = derivative_inclusions(p, node.t, params)
            tl, th = node.t.lo, node.t.hi
            overestimator = None
            t_dagger: float | None = None

            if f_prime.lo >= 0.0:
                branch = "nondecreasing"
                val = cache.f(th)
                node.f_dagger = Interval(val, val)
                local_t, local_f = th, val
            elif f_prime.hi <= 0.0:
                branch = "nonincreasing"
                val = cache.f(tl)
                node.f_dagger = Interval(val, val)
                local_t, local_f = tl, val
            elif f_second.lo >= 0.0:
                branch = "convex"
                f_left = cache.f(tl)
                f_right = cache.f(th)
                if f_right >= f_left:
                    local_t, local_f = th, f_right
                else:
                    local_t, local_f = tl, f_left
                node.f_dagger = Interval(local_f, local_f)
            elif f_second.hi <= 0.0:
                branch = "concave"
                t_best, v_best = concave_max(cache.f, node.t, tol_t)
                pad = concave_value_pad(f_second.magnitude, tol_t, v_best)
                node.f_dagger = Interval(v_best, v_best + pad)
                convex_ops += 1
                local_t, local_f = t_best, v_best
            else:
                branch = "overestimator"
                cert = bound_for(
                    cfg.overestimator, p, node.t, f_prime, f_second, tol_t,
                    f_eval=cache.f, fp_eval=cache.f_prime,
                )
                if cert.convex_op_used:
                    convex_ops += 1
                node.f_dagger = Interval(cert.f_value, max(cert.f_value, cert.g_value))
                local_t, local_f = cert.t_dagger, cert.f_value
                t_dagger = cert.t_dagger
                overestimator = cert.curve.describe()

            if local_f > f_lower:
                f_lower = local_f
                witness_t = local_t

            if trace is not None:
                trace.append(
                    TraceEvent(
                        kind="node",
                        seq=node.seq,
                        t_lo=tl,
                        t_hi=th,
                        branch=branch,
                        f_prime=(f_prime.lo, f_prime.hi),
                        f_second=(f_second.lo, f_second.hi),
                        f_dagger=(node.f_dagger.lo, node.f_dagger.hi),
                        t_dagger=t_dagger,
                        overestimator=overestimator,
                        f_lower=f_lower,
                    )
                )

        f_upper = max(node.f_dagger.hi for node in nodes)
        if trace is not None:
            sweep_seq += 1
            trace.append(
                TraceEvent(kind="sweep", seq=sweep_seq, f_lower=f_lower, f_upper=f_upper)
            )

        if f_upper - f_lower <= cfg.epsilon:
            return _report(
                f_upper, f_lower, bisections, convex_ops, len(nodes),
                SolveStatus.EPS_OPTIMAL, witness_t, case, start,
            )

        # Drop nodes that cannot beat the incumbent, keeping converged ones so
        # the winner always survives and the upper bound stays valid.
        nodes = [
            node
            for node in nodes
            if not (node.f_dagger.hi <= f_lower and node.f_dagger.width > cfg.epsilon)
        ]

        widest = nodes[0]
        for node in nodes[1:]:
            if node.f_dagger.width > widest.f_dagger.width:
                widest = node

        if bisections >= cfg.max_bisections:
            return _report(
                f_upper, f_lower, bisections, convex_ops, len(nodes),
                SolveStatus.BUDGET_EXHAUSTED, witness_t, case, start,
            )
        if widest.t.width <= min_t_width:
            return _report(
                f_upper, f_lower, bisections, convex_ops, len(nodes),
                SolveStatus.WIDTH_FLOOR, witness_t, case, start,
            )

        nodes.remove(widest)
        mid = 0.5 * (widest.t.lo + widest.t.hi)
        nodes.append(_Node(Interval(widest.t.lo, mid), seq=next_seq))
        nodes.append(_Node(Interval(mid, widest.t.hi), seq=next_seq + 1))
        next_seq += 2
        bisections += 1


def _report(
    f_upper: float,
    f_lower: float,
    bisections: int,
    convex_ops: int,
    nodes_final: int,
    status: SolveStatus,
    witness_t: float,
    case: AnalyticCase,
    start: float,
) -> SolveReport:
    return SolveReport(
        f_upper=f_upper,
        f_lower=f_lower,
        gap=f_upper - f_lower,
        bisections=bisections,
        convex_ops=convex_ops,
        nodes_final=nodes_final,
        status=status,
        witness_t=witness_t,
        analytic_case=case,
        wall_time_s=time.perf_counter() - start,
    )
