"""Interval enclosures of the matrix exponential.

The enclosure scales the input by 2^-l, evaluates a degree-k Taylor
polynomial in Horner form with interval arithmetic, pads every entry by a
norm-based truncation bound, and squares the result l times.  The truncation
remainder R = sum_{i>k} C^i / i! satisfies

    ||R||_inf <= ||C||^{k+1} / ((k+1)! (1 - ||C||/(k+2)))

whenever ||C|| < k+2, and a matrix with ||R||_inf <= r has every entry within
[-r, r], so the pad is applied to every entry.

High-accuracy point exponentials reuse the same enclosure on a degenerate
input and return its midpoint; the enclosure width doubles as an accuracy
certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .intervals import Interval, IntervalMatrix, _down, _up

__all__ = [
    "ExpParams",
    "ScalingTooSmall",
    "interval_exp",
    "point_exp",
    "point_exp_enclosure",
    "augmented_phi",
]

# Fixed Taylor degree for point evaluations; the scaling exponent is the
# smallest that brings the scaled norm to 1 or below, which keeps the
# squaring chain short (each squaring roughly doubles accumulated rounding).
_POINT_K = 20
_POINT_L_MAX = 64


class ScalingTooSmall(ValueError):
    """The scaling exponent l fails 2^l (k+2) > ||C||_inf.

    Carries the minimal l that would satisfy the precondition for the given
    k, or None when no l up to the supported maximum works.
    """

    def __init__(self, norm: float, k: int, l: int, needed_l: int | None):
        self.norm = norm
        self.k = k
        self.l = l
        self.needed_l = needed_l
        hint = f"; minimal sufficient l is {needed_l}" if needed_l is not None else ""
        super().__init__(
            f"scaling 2^{l} with Taylor degree {k} cannot dominate input norm {norm!r}{hint}"
        )


@dataclass(frozen=True)
class ExpParams:
    """Taylor degree k and scaling exponent l for the enclosure."""

    k: int = 10
    l: int = 10

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError("Taylor degree k must be a positive integer")
        if not isinstance(self.l, int) or self.l < 0:
            raise ValueError("scaling exponent l must be a nonnegative integer")


def _minimal_l(norm: float, k: int) -> int | None:
    for l in range(_POINT_L_MAX + 1):
        if 2.0**l * (k + 2) > norm:
            return l
    return None


def _reciprocal_interval(j: int) -> Interval:
    r = 1.0 / j
    return Interval(_down(r), _up(r))


def _truncation_radius(beta: float, k: int) -> float:
    """Upper bound on the Taylor truncation error norm, rounded outward.

    Requires beta < k+2 (guaranteed by the scaling precondition).
    """
    if beta == 0.0:
        return 0.0
    num = beta
    for _ in range(k):
        num = _up(num * beta)
    ratio = _up(beta / (k + 2))
    den = _down(float(math.factorial(k + 1)) * _down(1.0 - ratio))
    return _up(num / den)


def interval_exp(c: IntervalMatrix, params: ExpParams = ExpParams()) -> IntervalMatrix:
    """Enclosure of {exp(C) : C in [C]} by scaling, Taylor-Horner, squaring."""
    if not c.is_square:
        raise ValueError("interval_exp needs a square interval matrix")
    k, l = params.k, params.l
    norm = c.inf_norm_upper()
    if not (2.0**l * (k + 2) > norm):
        raise ScalingTooSmall(norm, k, l, _minimal_l(norm, k))

    n = c.shape[0]
    scaled = c.scale(2.0**-l)
    eye = IntervalMatrix.identity(n)

    # Horner form: I + C*(I + C*/2 (... (I + C*/k) ...)).
    horner = eye
    for j in range(k, 0, -1):
        horner = eye + scaled.scale(_reciprocal_interval(j)) @ horner

    radius = _truncation_radius(scaled.inf_norm_upper(), k)
    enclosure = horner.widen(radius) if radius > 0.0 else horner

    for _ in range(l):
        enclosure = enclosure @ enclosure
    return enclosure


def point_exp_enclosure(m: np.ndarray) -> IntervalMatrix:
    """Enclosure of exp(M) for a point matrix, with the fixed point-eval k.

    Scales just enough that the scaled norm is at most 1, where the degree-20
    truncation tail is below 10^-19 and few squarings are needed.
    """
    box = IntervalMatrix.from_point(m)
    norm = box.inf_norm_upper()
    l = 0 if norm <= 1.0 else math.ceil(math.log2(norm))
    if l > _POINT_L_MAX:
        raise ScalingTooSmall(norm, _POINT_K, _POINT_L_MAX, None)
    return interval_exp(box, ExpParams(_POINT_K, l))


def point_exp(m: np.ndarray) -> np.ndarray:
    """exp(M) for a point matrix: the midpoint of the certified enclosure."""
    return point_exp_enclosure(m).midpoint()


def augmented_phi(a: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    """integral_0^t exp(A tau) dtau . v, via one augmented exponential.

    exp(t [[A, v], [0, 0]]) has the integral in its top-right block, which
    avoids inverting A and is exact for singular A.
    """
    a = np.asarray(a, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("A must be square")
    n = a.shape[0]
    if v.shape != (n,):
        raise ValueError("v must be a vector matching A")
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise ValueError("t must be finite and nonnegative")
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = a
    aug[:n, n] = v
    return point_exp(t * aug)[:n, n]
