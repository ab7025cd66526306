"""Legendre, associated Legendre, shifted Legendre and Jacobi evaluation.

All recurrences run in scaled arithmetic so arguments far outside [-1, 1]
(which the exact-distribution determinants need) cannot overflow.  An
exact-integer polynomial type built from the Rodrigues representation
serves as the oracle for the derivative identities at small degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .backend import kernels
from .errors import DomainError, OracleScaleError
from .numerics import ScaledReal

_ORACLE_MAX_DEGREE = 16


def pochhammer_int(start, count):
    """Rising factorial start*(start+1)*...*(start+count-1) as an exact int."""
    out = 1
    for t in range(count):
        out *= start + t
    return out


@dataclass(frozen=True)
class PolyQuery:
    """Degree, derivative order and evaluation point for a Legendre query."""
    degree: int
    order: int
    argument: float

    def __post_init__(self):
        if self.degree < 0 or self.order < 0:
            raise DomainError("degree and derivative order must be >= 0")


@dataclass(frozen=True)
class JacobiQuery:
    """Degree, integer parameters, derivative order and argument."""
    degree: int
    a: int
    b: int
    order: int
    argument: float

    def __post_init__(self):
        if self.degree < 0 or self.order < 0:
            raise DomainError("degree and derivative order must be >= 0")
        if self.degree > 0 and (self.a < -self.degree or self.b < -self.degree):
            raise DomainError("integer parameters must be >= -degree")


def legendre(n, y):
    """P_n(y) as a ScaledReal."""
    if n < 0:
        raise DomainError("degree must be >= 0")
    return ScaledReal._raw(*kernels.legendre(n, float(y)))


def legendre_deriv(n, m, y):
    """m-th derivative of P_n at y.

    Computed as (n+m)!/(2**m n!) times the degree-(n-m) Jacobi polynomial
    with both parameters m; zero when m > n.
    """
    if n < 0 or m < 0:
        raise DomainError("degree and order must be >= 0")
    return ScaledReal._raw(*kernels.legendre_deriv(n, m, float(y)))


def jacobi(n, a, b, y):
    """Jacobi polynomial of degree n with integer parameters, at y."""
    JacobiQuery(n, a, b, 0, y)
    return ScaledReal._raw(*kernels.jacobi(n, int(a), int(b), float(y)))


def jacobi_deriv(n, a, b, k, y):
    """k-th derivative of the degree-n Jacobi polynomial at y.

    Uses d/dy P_n^(a,b) = (n+a+b+1)/2 * P_{n-1}^(a+1,b+1) iterated k times.
    """
    JacobiQuery(n, a, b, k, y)
    if k == 0:
        return jacobi(n, a, b, y)
    if k > n:
        return ScaledReal()
    pre = ScaledReal.from_int(pochhammer_int(n + a + b + 1, k))
    pre = ScaledReal(pre.mantissa, pre.exponent - k)
    return pre * jacobi(n - k, a + k, b + k, y)


def shifted_legendre(n, z):
    """Value at z of the degree-n polynomial orthogonal w.r.t. 1 on [0, 1]."""
    return legendre(n, 2.0 * z - 1.0)


def assoc_legendre(n, m, y):
    """Associated Legendre P_n^m(y) for |y| <= 1, order possibly negative."""
    if abs(y) > 1.0:
        raise DomainError("associated Legendre restricted to |y| <= 1")
    if abs(m) > n:
        raise DomainError("|order| must not exceed the degree")
    k = abs(m)
    base = legendre_deriv(n, k, y).to_float()
    value = (-1.0) ** k * (1.0 - y * y) ** (k / 2.0) * base
    if m >= 0:
        return value
    return (-1.0) ** k * (math.factorial(n - k) / math.factorial(n + k)) * value


class ExactPolynomial:
    """Dense polynomial with exact integer coefficients over 2**den_log2.

    Coefficient index equals the power of x.  All arithmetic is exact;
    this type exists purely as a small-degree oracle for identity tests.
    """

    __slots__ = ("coeffs", "den_log2")

    def __init__(self, coeffs, den_log2=0):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = coeffs
        self.den_log2 = den_log2

    def degree(self):
        return len(self.coeffs) - 1

    def derivative(self, order=1):
        c = self.coeffs
        for _ in range(order):
            c = [k * c[k] for k in range(1, len(c))]
        return ExactPolynomial(c, self.den_log2)

    def scalar_mul(self, s):
        return ExactPolynomial([s * c for c in self.coeffs], self.den_log2)

    def mul_x(self):
        return ExactPolynomial([0] + self.coeffs, self.den_log2)

    def _aligned(self, other):
        d = max(self.den_log2, other.den_log2)
        a = [c << (d - self.den_log2) for c in self.coeffs]
        b = [c << (d - other.den_log2) for c in other.coeffs]
        n = max(len(a), len(b))
        a += [0] * (n - len(a))
        b += [0] * (n - len(b))
        return a, b, d

    def __add__(self, other):
        a, b, d = self._aligned(other)
        return ExactPolynomial([x + y for x, y in zip(a, b)], d)

    def __sub__(self, other):
        a, b, d = self._aligned(other)
        return ExactPolynomial([x - y for x, y in zip(a, b)], d)

    def __eq__(self, other):
        if not isinstance(other, ExactPolynomial):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a == b

    def __hash__(self):
        return hash((tuple(self.coeffs), self.den_log2))

    def div_exact(self, divisor):
        """Exact division by a positive integer; raises if inexact."""
        if divisor <= 0:
            raise DomainError("divisor must be positive")
        twos = 0
        while divisor % 2 == 0:
            divisor //= 2
            twos += 1
        out = []
        for c in self.coeffs:
            q, r = divmod(c, divisor)
            if r:
                raise DomainError("inexact integer division of coefficients")
            out.append(q)
        return ExactPolynomial(out, self.den_log2 + twos)

    def eval(self, x):
        """Exact evaluation; pass a Fraction (or int) to stay exact."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc / Fraction(2) ** self.den_log2

    def eval_float(self, x):
        return float(self.eval(Fraction(x)))

    def __repr__(self):
        return f"ExactPolynomial({self.coeffs!r}, den_log2={self.den_log2})"


def exact_rodrigues_derivative(n, d):
    """The exact polynomial d^d/dx^d (x^2 - 1)^n, for n <= 16, d <= 2n+2."""
    if n < 0 or n > _ORACLE_MAX_DEGREE:
        raise OracleScaleError(f"oracle limited to degree <= {_ORACLE_MAX_DEGREE}")
    if d < 0 or d > 2 * n + 2:
        raise OracleScaleError("derivative order beyond oracle range")
    coeffs = [0] * (2 * n + 1)
    for k in range(n + 1):
        coeffs[2 * k] = math.comb(n, k) * (-1) ** (n - k)
    return ExactPolynomial(coeffs).derivative(d)


def exact_legendre(n):
    """P_n as an ExactPolynomial (Rodrigues form divided by 2**n n!)."""
    return exact_rodrigues_derivative(n, n).div_exact(math.factorial(n)).div_exact(2 ** n)
