"""Interval and interval-matrix arithmetic.

Endpoint formulas are checked exactly with rounding disabled; with rounding
enabled, results must contain the exact rational-arithmetic answer.  The
big sampled containment sweep lives in test_acceptance; this file keeps a
smaller seeded version plus all the structural properties.
"""

import math

import numpy as np
import pytest

from intersample import Interval, IntervalMatrix, outward_rounding_enabled, rounding
from oracles import (
    exact_add,
    exact_mat_mul,
    exact_mul,
    exact_pow,
    random_interval,
    sample_in,
)


def exact_case(lo_a, hi_a, lo_b, hi_b):
    return Interval(lo_a, hi_a), Interval(lo_b, hi_b)


def frac_leq(x, y) -> bool:
    from fractions import Fraction

    return Fraction(x) <= Fraction(y)


# -- endpoint formulas, rounding off -----------------------------------------


class TestExactEndpoints:
    def test_add(self):
        with rounding(False):
            a, b = exact_case(1, 2, 3, 4)
            assert (a + b).lo == 4.0 and (a + b).hi == 6.0
            z, c = exact_case(0, 0, -1, 5)
            assert (z + c).lo == -1.0 and (z + c).hi == 5.0
            d, e = exact_case(-2, 1, -3, -1)
            assert (d + e).lo == -5.0 and (d + e).hi == 0.0

    def test_mul(self):
        with rounding(False):
            a, b = exact_case(1, 2, 3, 4)
            assert (a * b).lo == 3.0 and (a * b).hi == 8.0
            c, d = exact_case(-1, 2, -3, 4)
            assert (c * d).lo == -6.0 and (c * d).hi == 8.0
            zero = Interval(0.0, 0.0)
            for iv in (a, c, Interval(-7.5, -0.25)):
                out = iv * zero
                assert out.lo == 0.0 and out.hi == 0.0

    def test_pow_three_cases(self):
        with rounding(False):
            assert Interval(-2, 3) ** 2 == Interval(0, 9)
            assert Interval(-3, -2) ** 2 == Interval(4, 9)
            assert Interval(-2, 3) ** 3 == Interval(-8, 27)
            assert Interval(2, 3) ** 2 == Interval(4, 9)

    def test_sub_and_neg(self):
        with rounding(False):
            assert Interval(1, 2) - Interval(0.5, 3) == Interval(-2, 1.5)
            assert -Interval(-1, 4) == Interval(-4, 1)
            assert 1 - Interval(0, 1) == Interval(0, 1)
            assert Interval(0, 1) + 2 == Interval(2, 3)

    def test_magnitude(self):
        assert Interval(-3, 2).magnitude == 3.0
        assert Interval(1, 4).magnitude == 4.0
        assert Interval(0, 0).magnitude == 0.0

    def test_width(self):
        assert Interval(-3, 2).width == 5.0
        assert Interval(7, 7).width == 0.0
        assert Interval.unbounded().width == math.inf

    def test_midpoint_contains(self):
        iv = Interval(-1.0, 3.0)
        assert iv.midpoint == 1.0
        assert iv.contains(-1.0) and iv.contains(3.0) and iv.contains(0.0)
        assert not iv.contains(3.0000001)
        assert iv.contains_interval(Interval(0, 2))
        assert not iv.contains_interval(Interval(0, 4))


# -- construction and sentinel rules ------------------------------------------


class TestValidation:
    def test_reversed_endpoints_rejected(self):
        with pytest.raises(ValueError):
            Interval(2.0, 1.0)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            Interval(math.nan, 1.0)
        with pytest.raises(ValueError):
            Interval(0.0, math.nan)

    def test_half_infinite_rejected(self):
        with pytest.raises(ValueError):
            Interval(-math.inf, 0.0)
        with pytest.raises(ValueError):
            Interval(0.0, math.inf)

    def test_sentinel_allowed_but_inert(self):
        s = Interval.unbounded()
        assert s.is_unbounded
        for op in (lambda: s + s, lambda: s * Interval(0, 1), lambda: -s, lambda: s**2):
            with pytest.raises(ValueError):
                op()

    def test_pow_exponent_validation(self):
        iv = Interval(1, 2)
        for bad in (0, -1, 1.5, True):
            with pytest.raises((TypeError, ValueError)):
                iv**bad

    def test_coercion_rejects_junk(self):
        with pytest.raises(TypeError):
            Interval(0, 1) + "wat"


# -- outward rounding ---------------------------------------------------------


class TestRounding:
    def test_flag_roundtrip(self):
        assert outward_rounding_enabled()
        with rounding(False):
            assert not outward_rounding_enabled()
            with rounding(True):
                assert outward_rounding_enabled()
            assert not outward_rounding_enabled()
        assert outward_rounding_enabled()

    def test_rounded_results_contain_exact(self):
        rng = np.random.default_rng(2024_01)
        for _ in range(300):
            a = random_interval(rng)
            b = random_interval(rng)
            ia, ib = Interval(*a), Interval(*b)
            out = ia + ib
            lo, hi = exact_add(a, b)
            assert frac_leq(out.lo, lo) and frac_leq(hi, out.hi)
            out = ia * ib
            lo, hi = exact_mul(a, b)
            assert frac_leq(out.lo, lo) and frac_leq(hi, out.hi)
            kappa = int(rng.integers(1, 6))
            out = ia**kappa
            lo, hi = exact_pow(a, kappa)
            assert frac_leq(out.lo, lo) and frac_leq(hi, out.hi)

    def test_nudge_is_one_step(self):
        out = Interval(1.0, 2.0) + Interval(1.0, 1.0)
        assert out.lo == math.nextafter(2.0, -math.inf)
        assert out.hi == math.nextafter(3.0, math.inf)


# -- sampled containment and structure ----------------------------------------


class TestContainment:
    def test_fundamental_containment_sampled(self):
        rng = np.random.default_rng(2024_02)
        for _ in range(500):
            a = random_interval(rng)
            b = random_interval(rng)
            ia, ib = Interval(*a), Interval(*b)
            kappa = int(rng.integers(1, 7))
            added = ia + ib
            multiplied = ia * ib
            powered = ia**kappa
            for x in sample_in(rng, *a, 5):
                for y in sample_in(rng, *b, 5):
                    assert added.contains(x + y)
                    assert multiplied.contains(x * y)
                assert powered.contains(x**kappa)

    def test_pow_tighter_than_repeated_mul(self):
        rng = np.random.default_rng(2024_03)
        for _ in range(200):
            iv = Interval(*random_interval(rng, scale=3.0))
            acc = iv
            for kappa in range(2, 7):
                acc = acc * iv
                assert acc.contains_interval(iv**kappa)

    def test_inclusion_monotonicity(self):
        rng = np.random.default_rng(2024_04)
        for _ in range(200):
            lo, hi = random_interval(rng)
            if hi == lo:
                continue
            w = hi - lo
            inner = Interval(lo + 0.25 * w, hi - 0.25 * w)
            outer = Interval(lo, hi)
            blo, bhi = random_interval(rng)
            other = Interval(blo, bhi)
            assert (outer + other).contains_interval(inner + other)
            assert (outer * other).contains_interval(inner * other)
            for kappa in (2, 3):
                assert (outer**kappa).contains_interval(inner**kappa)


# -- interval matrices ----------------------------------------------------------


class TestIntervalMatrix:
    def test_identity_product(self):
        rng = np.random.default_rng(2024_05)
        lo = rng.uniform(-2, 2, size=(3, 3))
        hi = lo + rng.random((3, 3))
        c = IntervalMatrix(lo, hi)
        eye = IntervalMatrix.identity(3)
        with rounding(False):
            out = eye @ c
        assert np.array_equal(out.lo, c.lo) and np.array_equal(out.hi, c.hi)
        out = eye @ c  # rounding on: containment, one step of slack
        assert (out.lo <= c.lo).all() and (c.hi <= out.hi).all()

    def test_degenerate_matmul_is_ordinary(self):
        a = np.array([[1.0, 2.0], [3.0, -4.0]])
        b = np.array([[0.5, 0.0], [-1.0, 2.0]])
        with rounding(False):
            out = IntervalMatrix.from_point(a) @ IntervalMatrix.from_point(b)
        assert np.array_equal(out.lo, a @ b)
        assert np.array_equal(out.hi, a @ b)

    def test_matmul_contains_exact_product(self):
        rng = np.random.default_rng(2024_06)
        for _ in range(50):
            a_lo = rng.uniform(-2, 2, size=(3, 3))
            a_hi = a_lo + rng.random((3, 3)) * 10.0 ** rng.uniform(-8, 0)
            b_lo = rng.uniform(-2, 2, size=(3, 3))
            b_hi = b_lo + rng.random((3, 3)) * 10.0 ** rng.uniform(-8, 0)
            out = IntervalMatrix(a_lo, a_hi) @ IntervalMatrix(b_lo, b_hi)
            lo, hi = exact_mat_mul(
                a_lo.tolist(), a_hi.tolist(), b_lo.tolist(), b_hi.tolist()
            )
            from fractions import Fraction

            for i in range(3):
                for j in range(3):
                    assert Fraction(out.lo[i, j]) <= lo[i][j]
                    assert hi[i][j] <= Fraction(out.hi[i, j])

    def test_matmul_contains_sampled_point_products(self):
        rng = np.random.default_rng(2024_07)
        for _ in range(30):
            a_lo = rng.uniform(-2, 2, size=(3, 3))
            a_hi = a_lo + rng.random((3, 3))
            b_lo = rng.uniform(-2, 2, size=(3, 3))
            b_hi = b_lo + rng.random((3, 3))
            prod = IntervalMatrix(a_lo, a_hi) @ IntervalMatrix(b_lo, b_hi)
            for _ in range(20):
                pa = rng.uniform(a_lo, a_hi)
                pb = rng.uniform(b_lo, b_hi)
                assert prod.contains_point(pa @ pb)

    def test_inf_norm_examples(self):
        m = IntervalMatrix.from_point(np.array([[1.0, -2.0], [0.0, 3.0]]))
        assert m.inf_norm() == 3.0
        allpm = IntervalMatrix(-np.ones((2, 2)), np.ones((2, 2)))
        assert allpm.inf_norm() == 2.0

    def test_inf_norm_equals_magnitude_norm(self):
        rng = np.random.default_rng(2024_08)
        for _ in range(100):
            lo = rng.uniform(-3, 3, size=(4, 4))
            hi = lo + rng.random((4, 4))
            m = IntervalMatrix(lo, hi)
            mag = np.maximum(np.abs(lo), np.abs(hi))
            assert m.inf_norm() == float(np.max(np.sum(mag, axis=1)))
            assert m.inf_norm_upper() >= m.inf_norm()

    def test_add_and_scale(self):
        a = IntervalMatrix(np.zeros((2, 2)), np.ones((2, 2)))
        b = IntervalMatrix.from_point(np.full((2, 2), 2.0))
        with rounding(False):
            out = a + b
            assert np.array_equal(out.lo, np.full((2, 2), 2.0))
            assert np.array_equal(out.hi, np.full((2, 2), 3.0))
            scaled = a.scale(-2.0)
            assert np.array_equal(scaled.lo, np.full((2, 2), -2.0))
            assert np.array_equal(scaled.hi, np.zeros((2, 2)))
            by_interval = b.scale(Interval(-1.0, 1.0))
            assert np.array_equal(by_interval.lo, np.full((2, 2), -2.0))
            assert np.array_equal(by_interval.hi, np.full((2, 2), 2.0))

    def test_widen(self):
        a = IntervalMatrix.from_point(np.eye(2))
        w = a.widen(0.5)
        assert (w.lo <= np.eye(2) - 0.5 + 1e-12).all()
        assert (w.hi >= np.eye(2) + 0.5 - 1e-12).all()
        with pytest.raises(ValueError):
            a.widen(-1.0)

    def test_entry_midpoint_width(self):
        m = IntervalMatrix(np.array([[0.0, -1.0]]), np.array([[2.0, 1.0]]))
        assert m.entry(0, 0) == Interval(0.0, 2.0)
        assert np.array_equal(m.midpoint(), np.array([[1.0, 0.0]]))
        assert np.array_equal(m.width(), np.array([[2.0, 2.0]]))
        assert m.shape == (1, 2) and not m.is_square

    def test_matrix_inclusion_monotonicity(self):
        rng = np.random.default_rng(2024_09)
        for _ in range(30):
            lo = rng.uniform(-2, 2, size=(3, 3))
            hi = lo + rng.random((3, 3))
            outer = IntervalMatrix(lo, hi)
            quarter = 0.25 * (hi - lo)
            inner = IntervalMatrix(lo + quarter, hi - quarter)
            blo = rng.uniform(-2, 2, size=(3, 3))
            other = IntervalMatrix(blo, blo + rng.random((3, 3)))
            assert (outer @ other).contains(inner @ other)
            assert (outer + other).contains(inner + other)

    def test_validation_errors(self):
        with pytest.raises(ValueError):
            IntervalMatrix(np.ones((2, 2)), np.zeros((2, 2)))  # lo > hi
        with pytest.raises(ValueError):
            IntervalMatrix(np.ones(3), np.ones(3))  # not 2-D
        with pytest.raises(ValueError):
            IntervalMatrix(np.full((2, 2), np.nan), np.full((2, 2), np.nan))
        with pytest.raises(ValueError):
            IntervalMatrix.from_point(np.ones((2, 2))) @ IntervalMatrix.from_point(
                np.ones((3, 3))
            )
        with pytest.raises(ValueError):
            IntervalMatrix.from_point(np.ones((2, 2))) + IntervalMatrix.from_point(
                np.ones((3, 3))
            )

    def test_readonly_endpoints(self):
        m = IntervalMatrix.from_point(np.eye(2))
        with pytest.raises(ValueError):
            m.lo[0, 0] = 5.0
