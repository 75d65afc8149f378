"""System-level verification: polytopes, queries, reports, serialization.

A system spec is the continuous pair (A, B), the sampling period dt, and two
polytopes given as normalized facet rows: X = {x : H x <= 1} for the state
and U = {u : Hu u <= 1} for the input.  A query is a held point (x0, u0).
Verification solves one facet objective per row of H and renders a verdict
per facet:

  * satisfied           iff the certified upper bound is <= 1,
  * certified violation iff the certified lower bound is  > 1,
  * inconclusive        otherwise.

Membership of x0, u0, and the discretized successor state are reported as
flags alongside, but never gate the solves: a query outside X still gets its
facets checked, and the flags let the caller tell the two findings apart.

All report numbers serialize as decimals with 17 significant digits, enough
to round-trip a double exactly, so equal reports produce identical bytes.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .facet import FacetProblem, eval_f
from .matexp import augmented_phi, point_exp
from .overestimators import OverestimatorKind
from .solver import SolveReport, SolverConfig, TraceEvent, solve, solve_with_trace

__all__ = [
    "SystemSpec",
    "QueryPoint",
    "FacetResult",
    "QueryReport",
    "VerificationReport",
    "load_system",
    "load_system_file",
    "discretize",
    "facet_problems",
    "verify_query",
    "verify_system",
    "sample_rows",
    "write_samples_csv",
    "facet_verdict",
    "dump_json",
]

VERDICT_SATISFIED = "satisfied"
VERDICT_VIOLATION = "certified violation"
VERDICT_INCONCLUSIVE = "inconclusive"

# Membership flags are diagnostics, not certificates.  Benchmark points sit
# exactly on polytope faces (a vertex input is held so the successor lands on
# the boundary), where the rounding of one exponential flips a bare <=, so
# the flags allow this much absolute slack on the normalized rows.
_MEMBERSHIP_SLACK = 1e-9


def _member(h: np.ndarray, x: np.ndarray) -> bool:
    return bool(np.all(h @ x <= 1.0 + _MEMBERSHIP_SLACK))


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """Sampled system with normalized state and input polytopes."""

    A: np.ndarray
    B: np.ndarray
    dt: float
    H: np.ndarray
    Hu: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.A, dtype=np.float64, copy=True)
        b = np.array(self.B, dtype=np.float64, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("A must be square")
        n = a.shape[0]
        if b.ndim != 2 or b.shape[0] != n:
            raise ValueError("B must be n x m")
        m = b.shape[1]
        h = np.array(self.H, dtype=np.float64, copy=True)
        hu = np.array(self.Hu, dtype=np.float64, copy=True)
        if h.ndim != 2 or h.shape[1] != n or h.shape[0] < 1:
            raise ValueError("H must be a nonempty q x n matrix")
        if hu.ndim != 2 or hu.shape[1] != m or hu.shape[0] < 1:
            raise ValueError("Hu must be a nonempty qu x m matrix")
        dt = float(self.dt)
        if not (math.isfinite(dt) and dt > 0.0):
            raise ValueError("dt must be finite and positive")
        for arr in (a, b, h, hu):
            if not np.isfinite(arr).all():
                raise ValueError("system data must be finite")
            arr.setflags(write=False)
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "H", h)
        object.__setattr__(self, "Hu", hu)
        object.__setattr__(self, "dt", dt)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]


@dataclass(frozen=True, eq=False)
class QueryPoint:
    """One held sample point to check, with an optional label."""

    x0: np.ndarray
    u0: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        x0 = np.array(self.x0, dtype=np.float64, copy=True)
        u0 = np.array(self.u0, dtype=np.float64, copy=True)
        if x0.ndim != 1 or u0.ndim != 1:
            raise ValueError("x0 and u0 must be vectors")
        if not (np.isfinite(x0).all() and np.isfinite(u0).all()):
            raise ValueError("query data must be finite")
        x0.setflags(write=False)
        u0.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "label", str(self.label))


@dataclass(frozen=True, eq=False)
class FacetResult:
    index: int
    h: tuple[float, ...]
    report: SolveReport
    verdict: str
    trace: tuple[TraceEvent, ...] = ()

    @property
    def satisfied(self) -> bool:
        return self.verdict == VERDICT_SATISFIED

    @property
    def violated(self) -> bool:
        return self.verdict == VERDICT_VIOLATION


@dataclass(frozen=True, eq=False)
class QueryReport:
    label: str
    x0: tuple[float, ...]
    u0: tuple[float, ...]
    x0_in_x: bool
    u0_in_u: bool
    next_state_in_x: bool
    facets: tuple[FacetResult, ...]

    @property
    def intersample_ok(self) -> bool:
        return all(f.satisfied for f in self.facets)

    @property
    def any_violation(self) -> bool:
        return any(f.violated for f in self.facets)


@dataclass(frozen=True, eq=False)
class VerificationReport:
    config: SolverConfig
    facet_selection: tuple[int, ...] | None
    queries: tuple[QueryReport, ...]

    @property
    def all_satisfied(self) -> bool:
        return all(q.intersample_ok for q in self.queries)

    @property
    def any_violation(self) -> bool:
        return any(q.any_violation for q in self.queries)


# -- loading ------------------------------------------------------------------


def load_system(data: dict) -> tuple[SystemSpec, list[QueryPoint]]:
    """Build a system spec and queries from the JSON input structure.

    Expected shape: {"A": [[...]], "B": [[...]], "dt": r,
    "X": {"H": [[...]]}, "U": {"H": [[...]]}, "queries": [{"x0", "u0",
    "label"?}]}.  Raises ValueError on any structural problem.
    """
    if not isinstance(data, dict):
        raise ValueError("system spec must be a JSON object")
    try:
        spec = SystemSpec(
            A=np.asarray(data["A"], dtype=np.float64),
            B=np.asarray(data["B"], dtype=np.float64),
            dt=data["dt"],
            H=np.asarray(data["X"]["H"], dtype=np.float64),
            Hu=np.asarray(data["U"]["H"], dtype=np.float64),
        )
    except KeyError as exc:
        raise ValueError(f"system spec is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad system spec: {exc}") from None
    raw_queries = data.get("queries", [])
    if not isinstance(raw_queries, list) or not raw_queries:
        raise ValueError("system spec needs a nonempty 'queries' list")
    queries = []
    for i, q in enumerate(raw_queries):
        try:
            queries.append(
                QueryPoint(
                    x0=np.asarray(q["x0"], dtype=np.float64),
                    u0=np.asarray(q["u0"], dtype=np.float64),
                    label=q.get("label", f"q{i}"),
                )
            )
        except KeyError as exc:
            raise ValueError(f"query {i} is missing {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ValueError(f"bad query {i}: {exc}") from None
        if queries[-1].x0.shape != (spec.n,) or queries[-1].u0.shape != (spec.m,):
            raise ValueError(f"query {i} dimensions do not match the system")
    return spec, queries


def load_system_file(path: str) -> tuple[SystemSpec, list[QueryPoint]]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON in {path}: {exc}") from None
    return load_system(data)


# -- core operations -----------------------------------------------------------


def discretize(spec: SystemSpec) -> tuple[np.ndarray, np.ndarray]:
    """Exact zero-order-hold pair: Ahat = exp(A dt), Bhat column by column."""
    ahat = point_exp(spec.A * spec.dt)
    bhat = np.empty_like(spec.B)
    for j in range(spec.m):
        bhat[:, j] = augmented_phi(spec.A, spec.B[:, j], spec.dt)
    return ahat, bhat


def facet_problems(spec: SystemSpec, query: QueryPoint) -> list[FacetProblem]:
    """One facet objective per row of the state polytope."""
    return [
        FacetProblem(spec.A, spec.B, query.x0, query.u0, spec.H[j], spec.dt)
        for j in range(spec.H.shape[0])
    ]


def facet_verdict(report: SolveReport) -> str:
    if report.f_upper <= 1.0:
        return VERDICT_SATISFIED
    if report.f_lower > 1.0:
        return VERDICT_VIOLATION
    return VERDICT_INCONCLUSIVE


def verify_query(
    spec: SystemSpec,
    query: QueryPoint,
    cfg: SolverConfig = SolverConfig(),
    facets: Sequence[int] | None = None,
    jobs: int = 1,
    with_trace: bool = False,
) -> QueryReport:
    """Solve the selected facets for one query and assemble the report.

    Facets are independent; jobs > 1 solves them in a thread pool.  Results
    are merged by facet index, so the report does not depend on scheduling.
    """
    problems = facet_problems(spec, query)
    if facets is None:
        selected = list(range(len(problems)))
    else:
        selected = list(facets)
        for j in selected:
            if not (0 <= j < len(problems)):
                raise ValueError(f"facet index {j} out of range")
    ahat, bhat = discretize(spec)
    x_next = ahat @ query.x0 + bhat @ query.u0

    def run(j: int) -> FacetResult:
        if with_trace:
            report, events = solve_with_trace(problems[j], cfg)
            trace = tuple(events)
        else:
            report = solve(problems[j], cfg)
            trace = ()
        return FacetResult(
            index=j,
            h=tuple(float(x) for x in spec.H[j]),
            report=report,
            verdict=facet_verdict(report),
            trace=trace,
        )

    if jobs > 1 and len(selected) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, selected))
    else:
        results = [run(j) for j in selected]

    return QueryReport(
        label=query.label,
        x0=tuple(float(x) for x in query.x0),
        u0=tuple(float(x) for x in query.u0),
        x0_in_x=_member(spec.H, query.x0),
        u0_in_u=_member(spec.Hu, query.u0),
        next_state_in_x=_member(spec.H, x_next),
        facets=tuple(results),
    )


def verify_system(
    spec: SystemSpec,
    queries: Iterable[QueryPoint],
    cfg: SolverConfig = SolverConfig(),
    facets: Sequence[int] | None = None,
    jobs: int = 1,
    with_trace: bool = False,
) -> VerificationReport:
    reports = tuple(
        verify_query(spec, q, cfg, facets=facets, jobs=jobs, with_trace=with_trace)
        for q in queries
    )
    return VerificationReport(
        config=cfg,
        facet_selection=tuple(facets) if facets is not None else None,
        queries=reports,
    )


def sample_rows(
    spec: SystemSpec, query: QueryPoint, facet_index: int, count: int = 200
) -> list[tuple[float, float, np.ndarray]]:
    """(t, f(t), x(t)) at uniform times across one period, endpoints included."""
    if count < 2:
        raise ValueError("need at least two sample points")
    if not (0 <= facet_index < spec.H.shape[0]):
        raise ValueError(f"facet index {facet_index} out of range")
    problem = FacetProblem(
        spec.A, spec.B, query.x0, query.u0, spec.H[facet_index], spec.dt
    )
    bu = spec.B @ query.u0
    rows = []
    for i in range(count):
        t = spec.dt * i / (count - 1)
        state = point_exp(spec.A * t) @ query.x0 + augmented_phi(spec.A, bu, t)
        rows.append((t, eval_f(problem, t), state))
    return rows


def write_samples_csv(
    fh: TextIO,
    spec: SystemSpec,
    query: QueryPoint,
    facet_index: int,
    count: int = 200,
) -> None:
    names = ",".join(f"x{i + 1}" for i in range(spec.n))
    fh.write(f"t,f,{names}\n")
    for t, f, state in sample_rows(spec, query, facet_index, count):
        cells = [_fmt(t), _fmt(f)] + [_fmt(x) for x in state]
        fh.write(",".join(cells) + "\n")


# -- serialization --------------------------------------------------------------


def _fmt(x: float) -> str:
    """Decimal with 17 significant digits: exact double round-trip."""
    return format(float(x), ".17g")


def dump_json(obj, fh: TextIO, indent: int = 0) -> None:
    """Minimal JSON writer that renders every float via _fmt.

    The stdlib encoder hardwires repr() for floats; this one guarantees the
    17-significant-digit contract.  Handles the plain data shapes reports are
    made of: dict, list/tuple, str, bool, None, int, float.
    """
    fh.write(_encode(obj, indent, 0))


def dumps_json(obj, indent: int = 0) -> str:
    return _encode(obj, indent, 0)


def _encode(obj, indent: int, level: int) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("reports must not contain non-finite numbers")
        return _fmt(obj)
    pad = ""
    sep = ","
    colon = ":"
    if indent:
        pad = "\n" + " " * (indent * (level + 1))
        sep = ","
        colon = ": "
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = []
        for key, value in obj.items():
            if not isinstance(key, str):
                raise TypeError("JSON object keys must be strings")
            parts.append(f"{pad}{json.dumps(key)}{colon}{_encode(value, indent, level + 1)}")
        closing = "\n" + " " * (indent * level) if indent else ""
        return "{" + sep.join(parts) + closing + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [f"{pad}{_encode(item, indent, level + 1)}" for item in obj]
        closing = "\n" + " " * (indent * level) if indent else ""
        return "[" + sep.join(parts) + closing + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_to_dict(report: VerificationReport, include_timing: bool = True) -> dict:
    cfg = report.config
    out: dict = {
        "config": {
            "epsilon": cfg.epsilon,
            "k": cfg.k,
            "l": cfg.l,
            "overestimator": cfg.overestimator.value,
            "max_bisections": cfg.max_bisections,
            "min_t_width": cfg.min_t_width,
        },
        "facet_selection": list(report.facet_selection)
        if report.facet_selection is not None
        else None,
        "queries": [],
    }
    for q in report.queries:
        qd: dict = {
            "label": q.label,
            "x0": list(q.x0),
            "u0": list(q.u0),
            "membership": {
                "x0_in_X": q.x0_in_x,
                "u0_in_U": q.u0_in_u,
                "next_state_in_X": q.next_state_in_x,
            },
            "facets": [],
            "intersample_ok": q.intersample_ok,
        }
        for fr in q.facets:
            rep = fr.report
            fd: dict = {
                "j": fr.index,
                "h": list(fr.h),
                "f_upper": rep.f_upper,
                "f_lower": rep.f_lower,
                "gap": rep.gap,
                "satisfied": fr.satisfied,
                "violated": fr.violated,
                "verdict": fr.verdict,
                "bisections": rep.bisections,
                "convex_ops": rep.convex_ops,
                "nodes_final": rep.nodes_final,
                "status": rep.status.value,
                "witness_t": rep.witness_t,
                "analytic_case": rep.analytic_case.kind.value,
            }
            if include_timing:
                fd["time_ms"] = rep.wall_time_s * 1e3
            qd["facets"].append(fd)
        out["queries"].append(qd)
    return out


def report_from_dict(data: dict) -> dict:
    """Parse a serialized report back into plain data and sanity-check it.

    Reports are consumed as data, not reconstructed into solver objects; this
    verifies the round-trip contract: parsing and re-serializing an emitted
    report reproduces it exactly.
    """
    required = {"config", "facet_selection", "queries"}
    if not isinstance(data, dict) or not required.issubset(data):
        raise ValueError("not a verification report")
    return data


def trace_event_to_dict(event: TraceEvent) -> dict:
    out: dict = {"kind": event.kind, "seq": event.seq}
    for name in ("t_lo", "t_hi", "branch", "t_dagger", "f_lower", "f_upper"):
        value = getattr(event, name)
        if value is not None:
            out[name] = value
    for name in ("f_prime", "f_second", "f_dagger"):
        value = getattr(event, name)
        if value is not None:
            out[name] = list(value)
    if event.overestimator is not None:
        out["overestimator"] = event.overestimator
    return out
