import math
from fractions import Fraction

import numpy as np
import pytest

from sigpde.specfun import bessel_i0, coeff_tables, hyp0f1


def series_i0(z2_quarter: Fraction, terms: int = 60) -> float:
    """Independent oracle: exact-rational partial sums of sum_k q^k/(k!)^2."""
    total = Fraction(0)
    for k in range(terms):
        total += z2_quarter**k / Fraction(math.factorial(k) ** 2)
    return float(total)


class TestBesselI0:
    def test_at_zero(self):
        assert bessel_i0(0.0) == 1.0

    def test_at_two(self):
        # oracle: sum 1/(k!)^2 = 2.2795853023360673 (exact-rational partial sums)
        assert series_i0(Fraction(1)) == 2.2795853023360673
        assert bessel_i0(2.0) == pytest.approx(2.2795853023360673, rel=1e-15)

    def test_at_two_sqrt_two(self):
        # oracle: sum 2^k/(k!)^2 = 4.2523508795026235
        assert series_i0(Fraction(2)) == 4.2523508795026235
        assert bessel_i0(2.0 * math.sqrt(2.0)) == pytest.approx(4.2523508795026235, rel=1e-15)

    def test_even_function_bitwise(self):
        for z in np.linspace(0.0, 50.0, 37):
            assert bessel_i0(z) == bessel_i0(-z)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            bessel_i0(float("nan"))

    def test_moderate_argument_accuracy(self):
        # against exact-rational series at the top of the supported range
        z = 50.0
        oracle = series_i0(Fraction(625), terms=200)
        assert bessel_i0(z) == pytest.approx(oracle, rel=1e-15)


class TestHyp0f1:
    def test_at_zero(self):
        for b in (1, 2, 7):
            assert hyp0f1(b, 0.0) == 1.0

    def test_reduces_to_bessel_for_b_one(self):
        rng = np.random.default_rng(12)
        for z in rng.uniform(0.0, 25.0, 200):
            assert hyp0f1(1, z) == pytest.approx(bessel_i0(2.0 * math.sqrt(z)), rel=1e-14)

    def test_b_two_at_one(self):
        # oracle: sum 1/(k!(k+1)!) = 1.590636854637329
        total = Fraction(0)
        for k in range(40):
            total += Fraction(1, math.factorial(k) * math.factorial(k + 1))
        assert float(total) == 1.590636854637329
        assert hyp0f1(2, 1.0) == pytest.approx(1.590636854637329, rel=1e-14)

    def test_negative_argument(self):
        # alternating series stays finite and matches the rational oracle
        total = Fraction(0)
        for k in range(60):
            total += Fraction((-9) ** k, math.factorial(k) ** 2)
        assert hyp0f1(1, -9.0) == pytest.approx(float(total), rel=1e-12, abs=1e-15)

    def test_invalid_b_rejected(self):
        with pytest.raises(ValueError):
            hyp0f1(0, 1.0)
        with pytest.raises(ValueError):
            hyp0f1(-2, 1.0)


class TestCoeffTables:
    def test_corner_entries(self):
        t = coeff_tables(4)
        assert t.a[0, 0] == 1.0
        assert t.a[2, 1] == 0.5
        assert t.b[1, 1] == 0.5
        assert t.b[0, 0] == 1.0

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            coeff_tables(1)
        with pytest.raises(ValueError):
            coeff_tables(65)
        coeff_tables(64)  # the cap itself stays representable

    def test_against_exact_factorials(self):
        n_max = 20
        t = coeff_tables(n_max)
        for n in range(n_max + 1):
            for k in range(n + 1):
                exact = Fraction(
                    math.factorial(k), math.factorial(n - k) * math.factorial(n)
                )
                assert t.a[n, k] == pytest.approx(float(exact), rel=1e-12)
            for k in range(n_max + 1):
                exact = Fraction(
                    math.factorial(k), math.factorial(n + k) * math.factorial(n)
                )
                assert t.b[n, k] == pytest.approx(float(exact), rel=1e-12)

    def test_strictly_positive_in_support(self):
        t = coeff_tables(32)
        for n in range(33):
            assert np.all(t.a[n, : n + 1] > 0.0)
        assert np.all(t.b > 0.0)
        assert np.all(np.isfinite(t.a)) and np.all(np.isfinite(t.b))
