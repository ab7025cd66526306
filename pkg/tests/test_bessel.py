import math
from fractions import Fraction

import pytest

from jacobiedge.bessel import bessel_i
from jacobiedge.errors import DomainError


def series_oracle(order, z_num, z_den, terms=50):
    """Exact-rational partial sum of the defining series at z = z_num/z_den."""
    z = Fraction(z_num, z_den)
    h = z / 2
    total = Fraction(0)
    for k in range(terms):
        total += h ** (order + 2 * k) / (
            Fraction(math.factorial(k)) * math.factorial(order + k))
    return total


def test_zero_argument():
    assert bessel_i(0, 0.0) == 1.0
    for m in (1, 2, 17, 64):
        assert bessel_i(m, 0.0) == 0.0


def test_order_zero_against_rational_series():
    expected = float(series_oracle(0, 2, 1))
    assert math.isclose(bessel_i(0, 2.0), expected, rel_tol=1e-15)


def test_various_orders_against_rational_series():
    for order in (1, 3, 7):
        for z_num, z_den in ((1, 2), (5, 1), (17, 3)):
            expected = float(series_oracle(order, z_num, z_den, terms=80))
            assert math.isclose(bessel_i(order, z_num / z_den), expected, rel_tol=1e-14)


def test_three_term_recurrence():
    # I_{l+2}(z) = I_l(z) - 2(l+1)/z * I_{l+1}(z)
    for l in range(0, 11):
        for z in (0.1, 0.7, 3.0, 12.0, 50.0):
            lhs = bessel_i(l + 2, z)
            rhs = bessel_i(l, z) - (2.0 * (l + 1) / z) * bessel_i(l + 1, z)
            assert math.isclose(lhs, rhs, rel_tol=1e-10)


def test_negative_order_symmetry_bit_identical():
    for l in (1, 5, 30):
        for z in (0.3, 4.0, 29.0):
            assert bessel_i(-l, z) == bessel_i(l, z)


def test_order_zero_strictly_increasing():
    grid = [0.05 * k for k in range(1, 800)]
    values = [bessel_i(0, z) for z in grid]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_i(0, -0.1)
    with pytest.raises(DomainError):
        bessel_i(0, 60.5)
    with pytest.raises(DomainError):
        bessel_i(65, 1.0)
