"""The scalar objective behind one constraint facet.

For a sampled linear system x' = Ax + Bu held at x0, u0 over one sampling
period, the state at time t is

    phi(t) = exp(At) x0 + integral_0^t exp(A tau) dtau . B u0
           = integral_0^t exp(A tau) dtau . v + x0,        v = A x0 + B u0,

and a facet row h of the (normalized) constraint polytope induces the scalar
objective f(t) = h . phi(t) on [0, dt].  The facet holds between samples iff
max f <= 1.  The derivatives have the closed forms

    f'(t)  = h . exp(At) v,        f''(t) = (h . A) exp(At) v,

so interval enclosures of exp(A [t]) give certified derivative ranges over a
time interval.  A few special structures admit exact answers and are detected
up front.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .intervals import Interval, IntervalMatrix
from .matexp import ExpParams, augmented_phi, interval_exp, point_exp

__all__ = [
    "FacetProblem",
    "CaseKind",
    "AnalyticCase",
    "eval_f",
    "eval_f_prime",
    "eval_f_second",
    "derivative_inclusions",
    "detect_analytic_case",
    "solve_eigenvector_case",
    "nilpotent_polynomial",
]

_RANGE_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class FacetProblem:
    """One facet objective: system matrices, held point, facet row, horizon."""

    A: np.ndarray
    B: np.ndarray
    x0: np.ndarray
    u0: np.ndarray
    h: np.ndarray
    dt: float

    # v = A x0 + B u0 is derived in __post_init__ and exposed as an attribute.

    def __post_init__(self) -> None:
        a = np.array(self.A, dtype=np.float64, copy=True)
        b = np.array(self.B, dtype=np.float64, copy=True)
        x0 = np.array(self.x0, dtype=np.float64, copy=True)
        u0 = np.array(self.u0, dtype=np.float64, copy=True)
        h = np.array(self.h, dtype=np.float64, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("A must be square")
        n = a.shape[0]
        if b.ndim != 2 or b.shape[0] != n:
            raise ValueError("B must be n x m")
        m = b.shape[1]
        if x0.shape != (n,) or h.shape != (n,):
            raise ValueError("x0 and h must be length-n vectors")
        if u0.shape != (m,):
            raise ValueError("u0 must be a length-m vector")
        dt = float(self.dt)
        if not (math.isfinite(dt) and dt > 0.0):
            raise ValueError("dt must be finite and positive")
        for arr in (a, b, x0, u0, h):
            if not np.isfinite(arr).all():
                raise ValueError("problem data must be finite")
        v = a @ x0 + b @ u0
        for arr in (a, b, x0, u0, h, v):
            arr.setflags(write=False)
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "dt", dt)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def _check_t(self, t: float) -> float:
        t = float(t)
        slack = _RANGE_SLACK * max(1.0, self.dt)
        if not math.isfinite(t) or t < -slack or t > self.dt + slack:
            raise ValueError(f"t={t!r} outside [0, {self.dt!r}]")
        return min(max(t, 0.0), self.dt)


def eval_f(p: FacetProblem, t: float) -> float:
    """f(t) = h . (integral_0^t exp(A tau) dtau . v + x0)."""
    t = p._check_t(t)
    return float(p.h @ (augmented_phi(p.A, p.v, t) + p.x0))


def eval_f_prime(p: FacetProblem, t: float) -> float:
    """f'(t) = h . exp(At) v."""
    t = p._check_t(t)
    return float(p.h @ point_exp(p.A * t) @ p.v)


def eval_f_second(p: FacetProblem, t: float) -> float:
    """f''(t) = (h . A) exp(At) v."""
    t = p._check_t(t)
    return float((p.h @ p.A) @ point_exp(p.A * t) @ p.v)


def derivative_inclusions(
    p: FacetProblem, tint: Interval, params: ExpParams = ExpParams()
) -> tuple[Interval, Interval]:
    """Certified ranges of f' and f'' over a time interval.

    Both derive from one enclosure [D] of {exp(At) : t in tint} applied to v:
    f' ranges over h.[D]v and f'' over (h.A).[D]v.
    """
    if tint.is_unbounded:
        raise ValueError("time interval must be bounded")
    slack = _RANGE_SLACK * max(1.0, p.dt)
    if tint.lo < -slack or tint.hi > p.dt + slack:
        raise ValueError(f"time interval {tint} outside [0, {p.dt!r}]")
    c = IntervalMatrix.from_point(p.A).scale(tint)
    d = interval_exp(c, params)
    dv = d @ IntervalMatrix.from_point(p.v[:, None])
    h_row = IntervalMatrix.from_point(p.h[None, :])
    f_prime = (h_row @ dv).entry(0, 0)
    ha_row = h_row @ IntervalMatrix.from_point(p.A)
    f_second = (ha_row @ dv).entry(0, 0)
    return f_prime, f_second


class CaseKind(Enum):
    """Structural special cases with exact answers."""

    NONE = "none"
    CONSTANT = "constant"
    EIGENVECTOR = "eigenvector"
    NILPOTENT = "nilpotent"


@dataclass(frozen=True)
class AnalyticCase:
    kind: CaseKind
    eigenvalue: float | None = None
    degree: int | None = None


def detect_analytic_case(p: FacetProblem, tol: float = 1e-10) -> AnalyticCase:
    """Detect exact-answer structure, most specific first.

    Constant: h = 0 or v = 0 makes f identically h.x0.  Eigenvector: if h is
    a left eigenvector of A (A^T h = lambda h, checked to a relative
    tolerance), then f'' = lambda f', so f is monotone and the maximum sits at
    an endpoint.  Nilpotent: A^r = 0 exactly for some r <= n makes f a
    polynomial of degree r; detection demands exact zeros so enclosure-free
    evaluation stays honest, and this case feeds test oracles only.
    """
    if not np.any(p.h) or not np.any(p.v):
        return AnalyticCase(CaseKind.CONSTANT)
    hh = float(p.h @ p.h)
    lam = float(p.h @ p.A @ p.h) / hh
    residual = float(np.max(np.abs(p.A.T @ p.h - lam * p.h)))
    scale = float(np.max(np.sum(np.abs(p.A), axis=1))) * float(np.max(np.abs(p.h)))
    if residual <= tol * scale:
        return AnalyticCase(CaseKind.EIGENVECTOR, eigenvalue=lam)
    power = p.A
    for r in range(1, p.n + 1):
        if not np.any(power):
            return AnalyticCase(CaseKind.NILPOTENT, degree=r)
        power = power @ p.A
    return AnalyticCase(CaseKind.NONE)


def solve_eigenvector_case(p: FacetProblem, case: AnalyticCase) -> tuple[float, float]:
    """Exact maximum for the eigenvector case: f is monotone.

    Returns (f_max, argmax_t); the maximum is at whichever endpoint wins.
    """
    if case.kind is not CaseKind.EIGENVECTOR:
        raise ValueError("not an eigenvector case")
    f0 = float(p.h @ p.x0)
    f_end = eval_f(p, p.dt)
    if f_end > f0:
        return f_end, p.dt
    return f0, 0.0


def nilpotent_polynomial(p: FacetProblem, case: AnalyticCase) -> np.ndarray:
    """Exact polynomial coefficients of f (ascending powers) for nilpotent A.

    With A^r = 0,
        f(t) = h.x0 + sum_{k=1}^{r-1} h.(A^k x0 + A^{k-1} B u0) / k! t^k
             + h.A^{r-1} B u0 / r! t^r.
    """
    if case.kind is not CaseKind.NILPOTENT or case.degree is None:
        raise ValueError("not a nilpotent case")
    r = case.degree
    bu = p.B @ p.u0
    coeffs = np.zeros(r + 1)
    coeffs[0] = p.h @ p.x0
    a_pow = np.eye(p.n)  # A^{k-1} as the loop enters iteration k
    for k in range(1, r):
        prev = a_pow
        a_pow = prev @ p.A  # A^k
        coeffs[k] = float(p.h @ (a_pow @ p.x0 + prev @ bu)) / math.factorial(k)
    coeffs[r] = float(p.h @ (a_pow @ bu)) / math.factorial(r)
    return coeffs
