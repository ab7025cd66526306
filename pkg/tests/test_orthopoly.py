import math
import random
from fractions import Fraction

import numpy as np
import pytest

from jacobiedge.errors import DomainError, OracleScaleError
from jacobiedge.orthopoly import (ExactPolynomial, assoc_legendre,
                                  exact_legendre, exact_rodrigues_derivative,
                                  jacobi, jacobi_deriv, legendre,
                                  legendre_deriv, pochhammer_int,
                                  shifted_legendre)


def exact_jacobi_poly(l, a, b):
    """Degree-l Jacobi polynomial as exact Fraction coefficients.

    Built straight from the binomial-sum definition; independent of the
    recurrence used by the library.
    """
    coeffs = [Fraction(0)] * (l + 1)
    for k in range(l + 1):
        c = Fraction(1, 2 ** l)
        for s in range(k):
            c *= Fraction(l + a - s, s + 1)
        for s in range(l - k):
            c *= Fraction(l + b - s, s + 1)
        # (x-1)^(l-k) (x+1)^k expanded
        for p in range(l - k + 1):
            for q in range(k + 1):
                coeffs[p + q] += c * math.comb(l - k, p) * (-1) ** (l - k - p) \
                    * math.comb(k, q)
    return coeffs


def eval_fraction_poly(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class TestLegendre:
    def test_degree_zero(self):
        for y in (-3.0, 0.0, 0.5, 1e5):
            assert legendre(0, y).to_float() == 1.0

    def test_value_at_one(self):
        for n in (1, 2, 7, 50, 400):
            assert legendre(n, 1.0).to_float() == 1.0

    def test_degree_two_at_three(self):
        assert math.isclose(legendre(2, 3.0).to_float(), 13.0, rel_tol=1e-15)

    def test_parity(self):
        for n in (1, 4, 9, 30):
            for y in (0.25, 0.9, 3.0, 1e5):
                a = legendre(n, -y)
                b = legendre(n, y)
                assert a.mantissa == (-1) ** n * b.mantissa and a.exponent == b.exponent

    def test_against_exact_coefficients(self):
        for n in range(0, 13):
            poly = exact_legendre(n)
            for y in (Fraction(-3, 4), Fraction(2, 5), Fraction(7, 2)):
                expected = float(poly.eval(y))
                got = legendre(n, float(y)).to_float()
                assert math.isclose(got, expected, rel_tol=1e-13, abs_tol=1e-15)

    def test_orthogonality_by_quadrature(self):
        nodes, weights = np.polynomial.legendre.leggauss(14)
        for n in range(13):
            pn = np.array([legendre(n, x).to_float() for x in nodes])
            for k in range(n + 1):
                pk = np.array([legendre(k, x).to_float() for x in nodes])
                val = float(np.sum(weights * pn * pk))
                expected = 2.0 / (2 * n + 1) if k == n else 0.0
                assert abs(val - expected) < 1e-9

    def test_negative_degree_rejected(self):
        with pytest.raises(DomainError):
            legendre(-1, 0.5)


class TestLegendreDeriv:
    def test_order_zero_matches_legendre(self):
        for n in (0, 3, 11):
            for y in (0.2, -4.0):
                assert legendre_deriv(n, 0, y).to_float() == legendre(n, y).to_float()

    def test_above_degree_is_zero(self):
        assert legendre_deriv(3, 4, 0.7).is_zero()

    def test_unit_argument_closed_form(self):
        # d^(j-1) P_(n+i-1) at 1 equals 2^(1-j) (n+i-j+1)_(2j-2) / (j-1)!
        for n in (1, 3, 10, 60, 200):
            for m in range(0, 9):
                expected = pochhammer_int(n - m + 1, 2 * m) / (2 ** m * math.factorial(m))
                got = legendre_deriv(n, m, 1.0).to_float()
                if expected == 0:
                    assert got == 0.0
                else:
                    assert abs(got - expected) / abs(expected) < 1e-12

    def test_second_derivative_against_exact_oracle(self):
        # differentiate the exact P_4 twice and evaluate exactly
        poly = exact_legendre(4).derivative(2)
        expected = float(poly.eval(Fraction(1, 2)))
        got = legendre_deriv(4, 2, 0.5).to_float()
        assert math.isclose(got, expected, rel_tol=1e-14)

    def test_finite_difference_consistency(self):
        for n, m, y in [(5, 1, 0.3), (12, 2, 0.4), (9, 3, 2.0), (7, 1, -1.7)]:
            h = 1e-6 * max(1.0, abs(y))
            fd = (legendre_deriv(n, m - 1, y + h).to_float()
                  - legendre_deriv(n, m - 1, y - h).to_float()) / (2 * h)
            got = legendre_deriv(n, m, y).to_float()
            assert math.isclose(got, fd, rel_tol=1e-6)


class TestIdentities:
    def test_lemma1_exact(self):
        for n in range(0, 11):
            for m in range(-(n + 1), n + 1):
                lhs = exact_rodrigues_derivative(n + 1, n + m + 1).scalar_mul(n - m + 1)
                rhs = exact_rodrigues_derivative(n + 1, n + m + 2).mul_x() \
                    - exact_rodrigues_derivative(n, n + m + 1).scalar_mul(2 * (n + 1))
                assert lhs == rhs

    def test_corollary2_numeric(self):
        rng = random.Random(13)
        for n in (1, 5, 17, 50):
            for m in range(0, 7):
                for _ in range(3):
                    y = rng.uniform(-5.0, 5.0)
                    lhs = (n - m + 1) * legendre_deriv(n + 1, m, y).to_float()
                    rhs = y * legendre_deriv(n + 1, m + 1, y).to_float() \
                        - legendre_deriv(n, m + 1, y).to_float()
                    assert math.isclose(lhs, rhs, rel_tol=1e-10, abs_tol=1e-10)

    def test_lemma2_exact_vs_associated(self):
        for n in range(0, 11):
            for m in range(-n, n + 1):
                poly = exact_rodrigues_derivative(n, n + m)
                den = 2 ** n * math.factorial(n)
                for y in (Fraction(-4, 5), Fraction(1, 8), Fraction(3, 7)):
                    lhs = float(poly.eval(y)) / den
                    yf = float(y)
                    rhs = (math.factorial(n + m) / math.factorial(n - m)) \
                        * (1.0 - yf * yf) ** (-m / 2.0) * assoc_legendre(n, -m, yf)
                    assert math.isclose(lhs, rhs, rel_tol=1e-12, abs_tol=1e-12)


class TestAssocLegendre:
    def test_order_zero(self):
        for n in (0, 2, 6):
            for y in (-0.4, 0.0, 0.9):
                assert math.isclose(assoc_legendre(n, 0, y),
                                    legendre(n, y).to_float(), rel_tol=1e-14,
                                    abs_tol=1e-15)

    def test_one_one_at_zero(self):
        assert assoc_legendre(1, 1, 0.0) == -1.0

    def test_negative_order_reflection(self):
        for y in (-0.6, 0.1, 0.8):
            lo = assoc_legendre(2, -2, y)
            hi = assoc_legendre(2, 2, y)
            assert math.isclose(lo, hi / 24.0, rel_tol=1e-13, abs_tol=1e-15)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            assoc_legendre(2, 1, 1.5)
        with pytest.raises(DomainError):
            assoc_legendre(2, 3, 0.5)


class TestJacobi:
    def test_degree_zero(self):
        assert jacobi(0, 3, -2, 0.7).to_float() == 1.0

    def test_legendre_specialization(self):
        for n in (1, 6, 40):
            for y in (0.3, -2.5, 1e4):
                assert math.isclose(jacobi(n, 0, 0, y).to_float(),
                                    legendre(n, y).to_float(), rel_tol=1e-13)

    def test_direct_expansion_small_case(self):
        coeffs = exact_jacobi_poly(1, 1, 2)
        assert math.isclose(jacobi(1, 1, 2, 0.0).to_float(),
                            float(eval_fraction_poly(coeffs, Fraction(0))), rel_tol=1e-15)
        assert jacobi(1, 1, 2, 0.0).to_float() == -0.5

    def test_negative_parameters_vs_exact_sum(self):
        # exercises the degenerate-recurrence start (a + b <= -2)
        for (l, a, b) in [(4, 0, -2), (6, 0, -3), (5, 2, -4), (7, 1, -3), (6, 0, -6)]:
            coeffs = exact_jacobi_poly(l, a, b)
            for y in (Fraction(-5, 4), Fraction(1, 3), Fraction(9, 2), Fraction(50)):
                expected = eval_fraction_poly(coeffs, y)
                got = jacobi(l, a, b, float(y)).to_float()
                assert math.isclose(got, float(expected), rel_tol=1e-11, abs_tol=1e-13)

    def test_large_degree_stability(self):
        # recurrence vs high-precision reference
        import mpmath as mp
        with mp.workdps(40):
            ref = float(mp.jacobi(300, 2, 1, mp.mpf("1.002")))
        assert math.isclose(jacobi(300, 2, 1, 1.002).to_float(), ref, rel_tol=1e-11)


class TestJacobiDeriv:
    def test_order_zero(self):
        assert jacobi_deriv(4, 1, 2, 0, 0.3).to_float() == jacobi(4, 1, 2, 0.3).to_float()

    def test_legendre_specialization(self):
        for k in (1, 2):
            assert math.isclose(jacobi_deriv(6, 0, 0, k, 0.4).to_float(),
                                legendre_deriv(6, k, 0.4).to_float(), rel_tol=1e-13)

    def test_exact_oracle(self):
        coeffs = exact_jacobi_poly(3, 1, 1)
        deriv = [k * coeffs[k] for k in range(1, len(coeffs))]
        expected = float(eval_fraction_poly(deriv, Fraction(1, 2)))
        got = jacobi_deriv(3, 1, 1, 1, 0.5).to_float()
        assert math.isclose(got, expected, rel_tol=1e-13)

    def test_above_degree_zero(self):
        assert jacobi_deriv(2, 1, 1, 3, 0.1).is_zero()


class TestShiftedLegendre:
    def test_at_one(self):
        for n in (0, 3, 9):
            assert shifted_legendre(n, 1.0).to_float() == 1.0

    def test_at_zero_alternates(self):
        for n in (0, 1, 2, 7):
            assert shifted_legendre(n, 0.0).to_float() == (-1.0) ** n

    def test_midpointish_value(self):
        assert math.isclose(shifted_legendre(2, 0.75).to_float(), -0.125, rel_tol=1e-15)

    def test_orthogonality_on_unit_interval(self):
        nodes, weights = np.polynomial.legendre.leggauss(12)
        x = (nodes + 1.0) / 2.0
        w = weights / 2.0
        for n in range(8):
            pn = np.array([shifted_legendre(n, t).to_float() for t in x])
            for k in range(n + 1):
                pk = np.array([shifted_legendre(k, t).to_float() for t in x])
                val = float(np.sum(w * pn * pk))
                expected = 1.0 / (2 * n + 1) if k == n else 0.0
                assert abs(val - expected) < 1e-9


class TestExactPolynomialOracle:
    def test_base_polynomial(self):
        p = exact_rodrigues_derivative(1, 0)
        assert p.coeffs == [-1, 0, 1]

    def test_second_derivative_constant(self):
        p = exact_rodrigues_derivative(1, 2)
        assert p.coeffs == [2]

    def test_legendre_normalization_at_one(self):
        for n in range(0, 17):
            assert exact_legendre(n).eval(Fraction(1)) == 1

    def test_scale_limits(self):
        with pytest.raises(OracleScaleError):
            exact_rodrigues_derivative(17, 0)
        with pytest.raises(OracleScaleError):
            exact_rodrigues_derivative(4, 11)

    def test_inexact_division_rejected(self):
        with pytest.raises(DomainError):
            ExactPolynomial([3, 1]).div_exact(2 * 3 + 1)
