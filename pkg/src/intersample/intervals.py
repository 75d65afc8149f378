"""Closed-interval arithmetic with outward rounding.

Scalar intervals carry two float endpoints; interval matrices carry two
endpoint arrays and apply every operation entrywise.  With outward rounding
enabled (the default), each computed endpoint is nudged one representable
float step in the adverse direction after every elementary endpoint
operation, so every result interval contains the exact real-arithmetic
result.  The nudge can be switched off globally for speed when soundness
against rounding is not required.

Division and transcendental functions are deliberately absent: the bound
computations downstream only ever add, multiply, and take integer powers.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = [
    "Interval",
    "IntervalMatrix",
    "outward_rounding_enabled",
    "set_outward_rounding",
    "rounding",
]

_INF = math.inf

# Process-global rounding switch.  All operations read it at call time; flip it
# before spawning concurrent work, not during.
_outward = True


def outward_rounding_enabled() -> bool:
    """Report whether endpoint nudging is currently applied."""
    return _outward


def set_outward_rounding(enabled: bool) -> bool:
    """Enable or disable outward rounding; returns the previous setting."""
    global _outward
    previous = _outward
    _outward = bool(enabled)
    return previous


@contextmanager
def rounding(enabled: bool) -> Iterator[None]:
    """Temporarily force outward rounding on or off."""
    previous = set_outward_rounding(enabled)
    try:
        yield
    finally:
        set_outward_rounding(previous)


def _down(x: float) -> float:
    return math.nextafter(x, -_INF) if _outward else x


def _up(x: float) -> float:
    return math.nextafter(x, _INF) if _outward else x


def _array_down(x: np.ndarray) -> np.ndarray:
    return np.nextafter(x, -_INF) if _outward else x


def _array_up(x: np.ndarray) -> np.ndarray:
    return np.nextafter(x, _INF) if _outward else x


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi] with float endpoints.

    Endpoints must be finite and ordered.  The single exception is the
    unbounded sentinel [-inf, inf], used by the solver to mark node bounds
    that have not been computed yet; arithmetic on the sentinel is an error.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo = float(self.lo)
        hi = float(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if not (lo <= hi):
            raise ValueError(f"interval endpoints out of order: [{lo}, {hi}]")
        if not (math.isfinite(lo) and math.isfinite(hi)):
            if not (lo == -_INF and hi == _INF):
                raise ValueError(
                    "non-finite endpoints are only allowed for the [-inf, inf] sentinel"
                )

    # -- constructors -------------------------------------------------------

    @classmethod
    def point(cls, value: float) -> "Interval":
        """Degenerate interval [value, value]."""
        return cls(value, value)

    @classmethod
    def unbounded(cls) -> "Interval":
        """The [-inf, inf] sentinel.  Not valid as an arithmetic operand."""
        return cls(-_INF, _INF)

    # -- predicates and measures -------------------------------------------

    @property
    def is_unbounded(self) -> bool:
        return self.lo == -_INF

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def magnitude(self) -> float:
        """max{|lo|, |hi|}, the largest absolute value in the interval."""
        return max(abs(self.lo), abs(self.hi))

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    # -- arithmetic ----------------------------------------------------------

    def _require_arithmetic(self) -> None:
        if self.is_unbounded:
            raise ValueError("arithmetic on the unbounded sentinel interval")

    def __add__(self, other: "Interval | float | int") -> "Interval":
        other = _coerce(other)
        self._require_arithmetic()
        other._require_arithmetic()
        return Interval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        self._require_arithmetic()
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "Interval | float | int") -> "Interval":
        return self + (-_coerce(other))

    def __rsub__(self, other: "Interval | float | int") -> "Interval":
        return _coerce(other) + (-self)

    def __mul__(self, other: "Interval | float | int") -> "Interval":
        other = _coerce(other)
        self._require_arithmetic()
        other._require_arithmetic()
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Interval":
        """Integer power, exact about sign: even powers never go negative."""
        if not isinstance(exponent, int) or isinstance(exponent, bool):
            raise TypeError("interval powers take a positive integer exponent")
        if exponent < 1:
            raise ValueError("interval powers take a positive integer exponent")
        self._require_arithmetic()
        lo_p = self.lo**exponent
        hi_p = self.hi**exponent
        if self.lo > 0.0 or exponent % 2 == 1:
            return Interval(_down(lo_p), _up(hi_p))
        if self.hi < 0.0:
            return Interval(_down(hi_p), _up(lo_p))
        # 0 is inside and the exponent is even: the image starts at 0 exactly.
        return Interval(0.0, _up(self.magnitude**exponent))

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"[{self.lo!r}, {self.hi!r}]"


def _coerce(value: "Interval | float | int") -> Interval:
    if isinstance(value, Interval):
        return value
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return Interval.point(float(value))
    raise TypeError(f"cannot interpret {value!r} as an interval")


class IntervalMatrix:
    """A matrix of closed intervals, stored as two endpoint arrays.

    All entries must be finite; the unbounded sentinel exists only at the
    scalar level.  Operations follow the entrywise endpoint rules of the
    scalar type, with products and sums nudged outward when rounding is on.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: np.ndarray, hi: np.ndarray, *, _validate: bool = True):
        if _validate:
            lo = np.array(lo, dtype=np.float64, copy=True)
            hi = np.array(hi, dtype=np.float64, copy=True)
            if lo.ndim != 2 or lo.shape != hi.shape:
                raise ValueError("interval matrix endpoints must be matching 2-D arrays")
            if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
                raise ValueError("interval matrix entries must be finite")
            if not (lo <= hi).all():
                raise ValueError("interval matrix has endpoints out of order")
            lo.setflags(write=False)
            hi.setflags(write=False)
        self.lo = lo
        self.hi = hi

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_point(cls, m: np.ndarray) -> "IntervalMatrix":
        """Degenerate interval matrix [M, M]."""
        m = np.asarray(m, dtype=np.float64)
        if m.ndim != 2:
            raise ValueError("expected a 2-D array")
        return cls(m, m)

    @classmethod
    def identity(cls, n: int) -> "IntervalMatrix":
        eye = np.eye(n)
        return cls(eye, eye, _validate=False)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntervalMatrix":
        z = np.zeros((rows, cols))
        return cls(z, z.copy(), _validate=False)

    # -- shape and access ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.lo.shape

    @property
    def is_square(self) -> bool:
        return self.lo.shape[0] == self.lo.shape[1]

    def entry(self, i: int, j: int) -> Interval:
        return Interval(float(self.lo[i, j]), float(self.hi[i, j]))

    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def width(self) -> np.ndarray:
        return self.hi - self.lo

    def magnitude(self) -> np.ndarray:
        """Entrywise max{|lo|, |hi|}."""
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def contains_point(self, m: np.ndarray) -> bool:
        m = np.asarray(m, dtype=np.float64)
        return bool((self.lo <= m).all() and (m <= self.hi).all())

    def contains(self, other: "IntervalMatrix") -> bool:
        return bool((self.lo <= other.lo).all() and (other.hi <= self.hi).all())

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if not isinstance(other, IntervalMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} + {other.shape}")
        return IntervalMatrix(
            _array_down(self.lo + other.lo),
            _array_up(self.hi + other.hi),
            _validate=False,
        )

    def __matmul__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if not isinstance(other, IntervalMatrix):
            return NotImplemented
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        al = self.lo[:, :, None]
        ah = self.hi[:, :, None]
        bl = other.lo[None, :, :]
        bh = other.hi[None, :, :]
        p1 = al * bl
        p2 = al * bh
        p3 = ah * bl
        p4 = ah * bh
        prod_lo = _array_down(np.minimum(np.minimum(p1, p2), np.minimum(p3, p4)))
        prod_hi = _array_up(np.maximum(np.maximum(p1, p2), np.maximum(p3, p4)))
        # Accumulate the inner dimension one term at a time so each addition
        # gets its own outward nudge.
        lo = prod_lo[:, 0, :]
        hi = prod_hi[:, 0, :]
        for k in range(1, self.shape[1]):
            lo = _array_down(lo + prod_lo[:, k, :])
            hi = _array_up(hi + prod_hi[:, k, :])
        return IntervalMatrix(lo, hi, _validate=False)

    def scale(self, factor: "Interval | float | int") -> "IntervalMatrix":
        """Multiply every entry by a scalar or scalar interval."""
        if isinstance(factor, Interval):
            factor._require_arithmetic()
            cands = (
                factor.lo * self.lo,
                factor.lo * self.hi,
                factor.hi * self.lo,
                factor.hi * self.hi,
            )
            lo = _array_down(np.minimum.reduce(cands))
            hi = _array_up(np.maximum.reduce(cands))
        else:
            s = float(factor)
            if not math.isfinite(s):
                raise ValueError("scale factor must be finite")
            a = s * self.lo
            b = s * self.hi
            lo = _array_down(np.minimum(a, b))
            hi = _array_up(np.maximum(a, b))
        return IntervalMatrix(lo, hi, _validate=False)

    def widen(self, radius: float) -> "IntervalMatrix":
        """Pad every entry outward by a nonnegative radius."""
        if radius < 0.0 or not math.isfinite(radius):
            raise ValueError("widening radius must be finite and nonnegative")
        return IntervalMatrix(
            _array_down(self.lo - radius),
            _array_up(self.hi + radius),
            _validate=False,
        )

    def inf_norm(self) -> float:
        """The induced infinity norm: max row sum of entry magnitudes."""
        return float(np.max(np.sum(self.magnitude(), axis=1)))

    def inf_norm_upper(self) -> float:
        """inf_norm with every addition rounded up; a certified upper bound."""
        mag = self.magnitude()
        acc = mag[:, 0].copy()
        for k in range(1, self.shape[1]):
            acc = _array_up(acc + mag[:, k])
        return float(np.max(acc))

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"IntervalMatrix(lo={self.lo!r}, hi={self.hi!r})"
