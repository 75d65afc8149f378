"""Concave overestimators of the facet objective on a time interval.

Each builder takes the facet problem, a subinterval [tl, th], and a certified
derivative range, and returns a certificate: a point t_dagger, the
overestimator value g(t_dagger) (an upper bound for max f on the
subinterval), and the true objective value f(t_dagger) (a lower bound for
the global maximum).  All three shapes require a sign-indefinite certified
f' range; the quadratic shapes additionally require a positive upper
curvature bound.

Shape 1 is a piecewise-affine hat from the endpoint values and the extreme
slopes; its apex is the only interior candidate.  Shape 2 is a piecewise
quadratic anchored at both endpoint values and slopes, bent upward by the
curvature bound.  Shape 3 adds a parabolic bump (th - t)(t - tl) to f itself,
which makes the sum concave, and maximizes it directly by golden-section
search; that search is the one convex optimization the solver accounts for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .facet import FacetProblem, eval_f, eval_f_prime
from .intervals import Interval

__all__ = [
    "OverestimatorKind",
    "HypothesisViolated",
    "BoundCertificate",
    "AffineHat",
    "QuadraticHat",
    "ConcaveShift",
    "bound_type1",
    "bound_type2",
    "bound_type3",
    "bound_for",
    "concave_max",
    "default_tol_t",
    "concave_value_pad",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_GOLDEN_MAX_ITER = 400


class OverestimatorKind(Enum):
    """Selectable overestimator shapes (CLI spelling as values)."""

    PIECEWISE_AFFINE = "pwa"
    PIECEWISE_QUADRATIC = "pwq"
    CONCAVE_SHIFT = "concave"


class HypothesisViolated(ValueError):
    """The derivative ranges do not satisfy the overestimator hypotheses."""


def _require_mixed_slope(f_prime: Interval) -> None:
    if not (f_prime.lo < 0.0 < f_prime.hi):
        raise HypothesisViolated(
            f"need a sign-indefinite f' range, got {f_prime!r}"
        )


def _require_positive_curvature(f_second: Interval) -> None:
    if not (f_second.hi > 0.0):
        raise HypothesisViolated(
            f"need a positive upper curvature bound, got {f_second!r}"
        )


@dataclass(frozen=True)
class AffineHat:
    """Piecewise-affine hat: rise at slope_hi from (tl, f_lo), fall into
    (th, f_hi) at slope_lo, meeting at the apex t_c."""

    t_lo: float
    t_hi: float
    f_at_lo: float
    f_at_hi: float
    slope_lo: float
    slope_hi: float
    t_c: float

    def __call__(self, t: float) -> float:
        left = self.f_at_lo + self.slope_hi * (t - self.t_lo)
        right = self.f_at_hi + self.slope_lo * (t - self.t_hi)
        return left if t <= self.t_c else right

    def describe(self) -> dict:
        return {
            "kind": "pwa",
            "t_lo": self.t_lo,
            "t_hi": self.t_hi,
            "f_at_lo": self.f_at_lo,
            "f_at_hi": self.f_at_hi,
            "slope_lo": self.slope_lo,
            "slope_hi": self.slope_hi,
            "t_c": self.t_c,
        }


@dataclass(frozen=True)
class QuadraticHat:
    """Piecewise quadratic anchored at both endpoints with curvature bound."""

    t_lo: float
    t_hi: float
    f_at_lo: float
    f_at_hi: float
    fp_at_lo: float
    fp_at_hi: float
    curvature: float  # upper bound on f''
    t_c: float

    def _left(self, t: float) -> float:
        d = t - self.t_lo
        return self.f_at_lo + self.fp_at_lo * d + 0.5 * self.curvature * d * d

    def _right(self, t: float) -> float:
        d = self.t_hi - t
        return self.f_at_hi - self.fp_at_hi * d + 0.5 * self.curvature * d * d

    def __call__(self, t: float) -> float:
        return self._left(t) if t <= self.t_c else self._right(t)

    def describe(self) -> dict:
        return {
            "kind": "pwq",
            "t_lo": self.t_lo,
            "t_hi": self.t_hi,
            "f_at_lo": self.f_at_lo,
            "f_at_hi": self.f_at_hi,
            "fp_at_lo": self.fp_at_lo,
            "fp_at_hi": self.fp_at_hi,
            "curvature": self.curvature,
            "t_c": self.t_c,
        }


@dataclass(frozen=True, eq=False)
class ConcaveShift:
    """f plus the parabolic bump (curvature/2)(t - tl)(th - t), concave."""

    problem: FacetProblem
    t_lo: float
    t_hi: float
    curvature: float  # upper bound on f''
    f_eval: Callable[[float], float] | None = None

    def __call__(self, t: float) -> float:
        bump = 0.5 * self.curvature * (t - self.t_lo) * (self.t_hi - t)
        base = self.f_eval(t) if self.f_eval is not None else eval_f(self.problem, t)
        return base + bump

    def describe(self) -> dict:
        return {
            "kind": "concave",
            "t_lo": self.t_lo,
            "t_hi": self.t_hi,
            "curvature": self.curvature,
        }


@dataclass(frozen=True, eq=False)
class BoundCertificate:
    """Output of one overestimator: bounds and the point they hang on.

    g_value >= max f on the subinterval; f_value = f(t_dagger) <= max f.
    """

    t_dagger: float
    g_value: float
    f_value: float
    convex_op_used: bool
    curve: AffineHat | QuadraticHat | ConcaveShift


def _clamp(t: float, lo: float, hi: float) -> float:
    return min(max(t, lo), hi)


def bound_type1(
    p: FacetProblem,
    tint: Interval,
    f_prime: Interval,
    *,
    f_eval: Callable[[float], float] | None = None,
) -> BoundCertificate:
    """Piecewise-affine overestimator from endpoint values and slope bounds."""
    _require_mixed_slope(f_prime)
    if not (tint.width > 0.0):
        raise ValueError("need a nondegenerate time interval")
    f = f_eval if f_eval is not None else (lambda t: eval_f(p, t))
    tl, th = tint.lo, tint.hi
    f_lo = f(tl)
    f_hi = f(th)
    sl, sh = f_prime.lo, f_prime.hi
    t_c = _clamp((sh * tl - sl * th + f_hi - f_lo) / (sh - sl), tl, th)
    hat = AffineHat(tl, th, f_lo, f_hi, sl, sh, t_c)
    # The two pieces agree at the apex in exact arithmetic; take the larger
    # evaluation so rounding never shaves the bound.
    g_value = max(f_lo + sh * (t_c - tl), f_hi + sl * (t_c - th))
    return BoundCertificate(t_c, g_value, f(t_c), False, hat)


def bound_type2(
    p: FacetProblem,
    tint: Interval,
    f_second: Interval,
    *,
    f_eval: Callable[[float], float] | None = None,
    fp_eval: Callable[[float], float] | None = None,
) -> BoundCertificate:
    """Piecewise-quadratic overestimator anchored at both endpoints."""
    _require_positive_curvature(f_second)
    if not (tint.width > 0.0):
        raise ValueError("need a nondegenerate time interval")
    f = f_eval if f_eval is not None else (lambda t: eval_f(p, t))
    fp = fp_eval if fp_eval is not None else (lambda t: eval_f_prime(p, t))
    tl, th = tint.lo, tint.hi
    curvature = f_second.hi
    f_lo = f(tl)
    f_hi = f(th)
    fp_lo = fp(tl)
    fp_hi = fp(th)
    secant = (fp_hi - fp_lo) / (th - tl)
    denom = curvature * (th - tl) + fp_lo - fp_hi
    if secant < curvature and denom > 0.0:
        t_c = (
            0.5 * curvature * (th * th - tl * tl)
            + fp_lo * tl
            - fp_hi * th
            + f_hi
            - f_lo
        ) / denom
        t_c = _clamp(t_c, tl, th)
    else:
        t_c = th
    hat = QuadraticHat(tl, th, f_lo, f_hi, fp_lo, fp_hi, curvature, t_c)
    # Each piece overestimates f on the whole subinterval and is convex, so
    # the hat's maximum sits at an endpoint or the crossover.
    candidates = [(tl, f_lo), (th, hat(th))]
    if tl < t_c < th:
        candidates.insert(1, (t_c, max(hat._left(t_c), hat._right(t_c))))
    t_dagger, g_value = candidates[0]
    for t, g in candidates[1:]:
        if g > g_value:
            t_dagger, g_value = t, g
    return BoundCertificate(t_dagger, g_value, f(t_dagger), False, hat)


def bound_type3(
    p: FacetProblem,
    tint: Interval,
    f_second: Interval,
    tol_t: float | None = None,
    *,
    f_eval: Callable[[float], float] | None = None,
) -> BoundCertificate:
    """Concave-shift overestimator, maximized by one golden-section search."""
    _require_positive_curvature(f_second)
    if not (tint.width > 0.0):
        raise ValueError("need a nondegenerate time interval")
    f = f_eval if f_eval is not None else (lambda t: eval_f(p, t))
    curvature = f_second.hi
    shifted = ConcaveShift(p, tint.lo, tint.hi, curvature, f_eval)
    if tol_t is None:
        tol_t = default_tol_t(p.dt)
    t_dagger, value = concave_max(shifted, tint, tol_t)
    pad = concave_value_pad(f_second.magnitude + curvature, tol_t, value)
    return BoundCertificate(t_dagger, value + pad, f(t_dagger), True, shifted)


def bound_for(
    kind: OverestimatorKind,
    p: FacetProblem,
    tint: Interval,
    f_prime: Interval,
    f_second: Interval,
    tol_t: float | None = None,
    *,
    f_eval: Callable[[float], float] | None = None,
    fp_eval: Callable[[float], float] | None = None,
) -> BoundCertificate:
    """Dispatch to the selected overestimator shape."""
    if kind is OverestimatorKind.PIECEWISE_AFFINE:
        return bound_type1(p, tint, f_prime, f_eval=f_eval)
    if kind is OverestimatorKind.PIECEWISE_QUADRATIC:
        return bound_type2(p, tint, f_second, f_eval=f_eval, fp_eval=fp_eval)
    if kind is OverestimatorKind.CONCAVE_SHIFT:
        return bound_type3(p, tint, f_second, tol_t, f_eval=f_eval)
    raise ValueError(f"unknown overestimator kind {kind!r}")


def default_tol_t(dt: float) -> float:
    """Bracket tolerance for golden-section search, far below the optimality
    tolerance but safely above float spacing."""
    return max(1e-12 * dt, 8.0 * math.ulp(dt))


def concave_value_pad(curvature_bound: float | None, tol_t: float, value: float) -> float:
    """Outward pad turning a best-sampled value into an upper bound.

    The search localizes the maximizer and the best sample within one final
    bracket of width tol_t, so the shortfall is at most
    (curvature bound) tol^2 / 2; padding by the full square keeps a margin.
    Without a curvature bound, fall back to a fixed relative pad.
    """
    if curvature_bound is not None and math.isfinite(curvature_bound):
        return abs(curvature_bound) * tol_t * tol_t
    return 1e-12 * max(1.0, abs(value))


def concave_max(
    evaluator: Callable[[float], float], tint: Interval, tol_t: float
) -> tuple[float, float]:
    """Golden-section maximization over a bounded interval.

    Returns (argbest, best value) over every point actually evaluated,
    endpoints included, after narrowing the bracket to tol_t.  For a concave
    evaluator the best sample is within a curvature-controlled pad of the
    true maximum.  Deterministic: no randomness, fixed iteration rule.
    """
    if tint.is_unbounded:
        raise ValueError("need a bounded interval")
    a, b = tint.lo, tint.hi
    if not (tol_t > 0.0):
        raise ValueError("tol_t must be positive")
    best_t, best_v = a, evaluator(a)
    if b > a:
        vb = evaluator(b)
        if vb > best_v:
            best_t, best_v = b, vb
    if b - a <= tol_t:
        return best_t, best_v

    span = b - a
    x1 = _clamp(b - _INV_PHI * span, a, b)
    x2 = _clamp(a + _INV_PHI * span, a, b)
    v1 = evaluator(x1)
    v2 = evaluator(x2)
    for t, v in ((x1, v1), (x2, v2)):
        if v > best_v:
            best_t, best_v = t, v
    for _ in range(_GOLDEN_MAX_ITER):
        if b - a <= tol_t:
            break
        if v1 < v2:
            a = x1
            x1, v1 = x2, v2
            x2 = _clamp(a + _INV_PHI * (b - a), a, b)
            v2 = evaluator(x2)
            if v2 > best_v:
                best_t, best_v = x2, v2
        else:
            b = x2
            x2, v2 = x1, v1
            x1 = _clamp(b - _INV_PHI * (b - a), a, b)
            v1 = evaluator(x1)
            if v1 > best_v:
                best_t, best_v = x1, v1
    return best_t, best_v
