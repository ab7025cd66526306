import math

import numpy as np
import pytest

from jacobiedge.bessel import bessel_i
from jacobiedge.errors import DomainError
from jacobiedge.exact import EnsembleParams, smallest_cdf
from jacobiedge.hardedge import (bessel_expansion_residuals, corrected_cdf,
                                 correction_is_proven, jue_corrected_cdf,
                                 limit_cdf, limit_pdf, lue_reference_cdf,
                                 scaled_correction_density)


def simpson(f, a, b, panels):
    xs = np.linspace(a, b, 2 * panels + 1)
    ys = np.array([f(float(x)) for x in xs])
    h = (b - a) / (2 * panels)
    return h / 3.0 * (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum() + 2 * ys[2:-2:2].sum())


class TestLimitLaw:
    def test_empty_determinant(self):
        for x in (0.0, 0.5, 3.0):
            assert math.isclose(limit_cdf(0, x), 1.0 - math.exp(-x), rel_tol=1e-15)

    def test_one_by_one(self):
        x = 1.0
        expected = 1.0 - math.exp(-1.0) * bessel_i(0, 2.0)
        assert math.isclose(limit_cdf(1, x), expected, rel_tol=1e-14)

    def test_two_by_two_closed_form(self):
        expected = 1.0 - math.exp(-1.0) * (bessel_i(0, 2.0) ** 2 - bessel_i(1, 2.0) ** 2)
        assert math.isclose(limit_cdf(2, 1.0), expected, rel_tol=1e-13)

    def test_toeplitz_structure(self):
        # the determinant must depend on entries only through i - j: shifting
        # the whole index window must not change the value
        import mpmath as mp
        z = math.sqrt(4.0 * 2.5)
        alpha = 4
        base = np.array([[bessel_i(i - j, z) for j in range(alpha)] for i in range(alpha)])
        shifted = np.array([[bessel_i((i + 1) - (j + 1), z) for j in range(alpha)]
                            for i in range(alpha)])
        assert np.array_equal(base, shifted)
        with mp.workdps(40):
            ref = mp.det(mp.matrix(base.tolist()))
            expected = float(1 - mp.e ** mp.mpf(-2.5) * ref)
        assert math.isclose(limit_cdf(alpha, 2.5), expected, rel_tol=1e-12)

    def test_is_cdf(self):
        # the upper tail of the size-6 law is still ~4e-4 at x=50 (checked
        # at 50 digits), so saturation to 1e-12 is asserted at x=120
        for alpha in range(0, 7):
            grid = np.linspace(0.0, 120.0, 241)
            vals = [limit_cdf(alpha, float(x)) for x in grid]
            assert vals[0] == 0.0
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
            assert vals[-1] > 1.0 - 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            limit_cdf(1, -0.5)


class TestLimitDensity:
    def test_empty_case(self):
        assert limit_pdf(0, 1.3) == math.exp(-1.3)

    def test_one_by_one(self):
        x = 0.7
        expected = math.exp(-x) * bessel_i(2, math.sqrt(4 * x))
        assert math.isclose(limit_pdf(1, x), expected, rel_tol=1e-14)

    def test_matches_cdf_derivative(self):
        # differencing the survival form keeps the comparison well posed in
        # the upper tail; the lower grid edge moves up with alpha because
        # the density there drops below what double-precision differences
        # of an O(1) function can resolve
        from jacobiedge.hardedge import limit_survival
        starts = {0: 0.01, 1: 0.01, 2: 0.02, 3: 0.2}

        def central(alpha, x, h):
            return (limit_survival(alpha, x - h) - limit_survival(alpha, x + h)) / (2 * h)

        for alpha, lo in starts.items():
            for x in np.linspace(lo, 20.0, 12):
                x = float(x)
                h = 1e-4 * max(1.0, min(x, 20.0))
                fd = (4.0 * central(alpha, x, h / 2) - central(alpha, x, h)) / 3.0
                assert math.isclose(limit_pdf(alpha, x), fd, rel_tol=1e-6)

    def test_nonnegative_and_normalized(self):
        for alpha in range(0, 5):
            vals = [limit_pdf(alpha, float(x)) for x in np.linspace(0.0, 50.0, 100)]
            assert min(vals) >= 0.0
            total = simpson(lambda x: limit_pdf(alpha, x), 0.0, 80.0, 600)
            assert abs(total - 1.0) < 1e-4


class TestCorrectedLaw:
    def test_large_n_limit(self):
        p = EnsembleParams(10 ** 9, 2, 1)
        for x in (0.5, 2.0):
            assert math.isclose(corrected_cdf(p, x, "smallest").value,
                                limit_cdf(2, x), rel_tol=1e-8)

    def test_alpha1_zero_matches_binomial_expansion(self):
        # the exact law is (1-x/n^2)^(n^2+a2*n) and its 1/n expansion is
        # exactly the corrected formula
        n, a2 = 60, 3
        p = EnsembleParams(n, 0, a2)
        for x in (0.3, 1.0, 4.0):
            expansion = 1.0 - math.exp(-x) + (a2 / n) * x * math.exp(-x)
            assert math.isclose(corrected_cdf(p, x, "smallest").value, expansion,
                                rel_tol=1e-12)
            exact_value = smallest_cdf(p, x / n ** 2)
            assert abs(exact_value - corrected_cdf(p, x, "smallest").value) < 5.0 / n ** 2

    def test_correction_tightens_by_order(self):
        p = EnsembleParams(100, 2, 1)
        x = 1.0
        exact_value = smallest_cdf(p, x / 100 ** 2)
        gap_limit = abs(exact_value - limit_cdf(2, x))
        gap_corrected = abs(exact_value - corrected_cdf(p, x, "smallest").value)
        assert gap_corrected < gap_limit / 20.0

    def test_proven_flags(self):
        assert correction_is_proven(0, 3, "smallest")
        assert correction_is_proven(1, 2, "smallest")
        assert correction_is_proven(2, 2, "smallest")
        assert not correction_is_proven(2, 3, "smallest")
        assert not correction_is_proven(3, 0, "smallest")
        assert correction_is_proven(3, 1, "largest")
        assert correction_is_proven(1, 2, "largest")
        assert correction_is_proven(2, 2, "largest")
        assert not correction_is_proven(0, 3, "largest")
        assert corrected_cdf(EnsembleParams(5, 3, 0), 1.0, "smallest").proven is False
        assert corrected_cdf(EnsembleParams(5, 0, 3), 1.0, "smallest").proven is True

    def test_largest_edge_uses_other_alpha(self):
        p = EnsembleParams(50, 3, 1)
        v = corrected_cdf(p, 1.0, "largest").value
        expected = limit_cdf(1, 1.0) + (4 / 50) * 1.0 * limit_pdf(1, 1.0)
        assert math.isclose(v, expected, rel_tol=1e-14)


class TestRescaledLaws:
    def test_jue_is_half_argument_form(self):
        p = EnsembleParams(25, 2, 1)
        for x in (0.0, 0.8, 3.0):
            expected = limit_cdf(2, x / 2) + (3 / 50) * x * limit_pdf(2, x / 2)
            assert math.isclose(jue_corrected_cdf(p, x), expected, rel_tol=1e-14,
                                abs_tol=1e-15)
        assert jue_corrected_cdf(p, 0.0) == 0.0

    def test_reference_curve_coincides_when_alpha2_vanishes(self):
        p = EnsembleParams(30, 2, 0)
        for x in (0.4, 1.7, 6.0):
            assert math.isclose(jue_corrected_cdf(p, x),
                                lue_reference_cdf(2, 30, x), rel_tol=1e-15)

    def test_reference_large_n(self):
        assert math.isclose(lue_reference_cdf(1, 10 ** 9, 2.0),
                            limit_cdf(1, 1.0), rel_tol=1e-8)


class TestScaledCorrectionDensity:
    def test_alpha1_zero_linear(self):
        for a2 in (0, 1, 3):
            for x in (0.25, 1.0, 2.0):
                assert math.isclose(scaled_correction_density(0, a2, x),
                                    a2 * (1.0 - x), rel_tol=1e-14, abs_tol=1e-15)

    def test_alpha1_two_closed_form_value(self):
        i0, i1 = bessel_i(0, 2.0), bessel_i(1, 2.0)
        expected = 2.0 * ((1 - 1) * (i0 * i0 - 2 * i1 * i1)
                          + 1.0 * (i1 * i1 * 3.0 - 2.0 * i0 * i1))
        assert math.isclose(scaled_correction_density(2, 0, 1.0), expected,
                            rel_tol=1e-13)

    def test_closed_vs_finite_difference(self):
        for a1 in (0, 1, 2):
            for x in (0.5, 1.0, 2.0):
                h = 1e-6 * max(1.0, x)
                fd = math.exp(x) * (a1 + 1) * (
                    (x + h) * limit_pdf(a1, x + h)
                    - (x - h) * limit_pdf(a1, x - h)) / (2 * h)
                assert math.isclose(scaled_correction_density(a1, 1, x), fd,
                                    rel_tol=1e-6, abs_tol=1e-9)

    def test_numeric_branch_smoke(self):
        v = scaled_correction_density(3, 0, 1.5)
        assert math.isfinite(v)

    def test_domain(self):
        with pytest.raises(DomainError):
            scaled_correction_density(1, 1, 0.0)


class TestExpansionResiduals:
    def test_plain_polynomial_limit(self):
        r16 = bessel_expansion_residuals(0, 0, 16, 1.0)
        r256 = bessel_expansion_residuals(0, 0, 256, 1.0)
        assert abs(r256[0]) < abs(r16[0]) / 100.0
        assert abs(r256[1]) < abs(r16[1]) / 100.0

    def test_rate_band(self):
        for m in (0, 1, 2, 3):
            for c in (-1, 0, 2):
                for x in (0.5, 2.0):
                    r1 = bessel_expansion_residuals(m, c, 64, x)
                    r2 = bessel_expansion_residuals(m, c, 128, x)
                    for a, b in zip(r1, r2):
                        assert 0.15 <= abs(b) / abs(a) <= 0.4

    def test_zero_coordinate(self):
        rd, ra = bessel_expansion_residuals(0, 0, 64, 0.0)
        assert abs(rd) < 1e-12 and abs(ra) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_expansion_residuals(1, 0, 64, 0.0)
        with pytest.raises(DomainError):
            bessel_expansion_residuals(2, 0, 3, 1.0)
