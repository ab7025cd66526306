"""Overflow-safe scalar arithmetic and small-matrix determinants.

Every exact-distribution formula in this package multiplies terms like
(1 - xi)**(n*n + ...) by polynomial values that grow super-exponentially
in the matrix dimension.  `ScaledReal` keeps a double mantissa and an
unbounded integer power-of-two exponent so those products stay exact in
range; `ScaledMatrix` holds such numbers densely for the determinants.
"""

from __future__ import annotations

import math

import numpy as np

from .backend import kernels
from .errors import DomainError


class ScaledReal:
    """A real number mantissa * 2**exponent with |mantissa| in [1, 2).

    Zero is represented canonically as (0.0, 0).  The power-of-two
    exponent makes renormalization exact: no rounding is introduced by
    scaling, only by the mantissa arithmetic itself.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa=0.0, exponent=0):
        if not math.isfinite(mantissa):
            raise DomainError(f"non-finite mantissa {mantissa!r}")
        m, e = kernels.normalize(float(mantissa), int(exponent))
        self.mantissa = m
        self.exponent = e

    @classmethod
    def _raw(cls, m, e):
        out = object.__new__(cls)
        out.mantissa = m
        out.exponent = e
        return out

    @classmethod
    def from_int(cls, value):
        """Exact conversion of an arbitrarily large Python integer."""
        if value == 0:
            return cls()
        shift = max(0, value.bit_length() - 53)
        return cls(float(value >> shift), shift)

    def to_float(self):
        try:
            return math.ldexp(self.mantissa, self.exponent)
        except OverflowError:
            return math.inf if self.mantissa > 0 else -math.inf

    def is_zero(self):
        return self.mantissa == 0.0

    def __mul__(self, other):
        if isinstance(other, ScaledReal):
            return ScaledReal._raw(*kernels.mul(self.mantissa, self.exponent,
                                                other.mantissa, other.exponent))
        return ScaledReal(self.mantissa * other, self.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledReal):
            if other.is_zero():
                raise ZeroDivisionError("ScaledReal division by zero")
            return ScaledReal._raw(*kernels.div(self.mantissa, self.exponent,
                                                other.mantissa, other.exponent))
        return ScaledReal(self.mantissa / other, self.exponent)

    def __add__(self, other):
        if not isinstance(other, ScaledReal):
            other = ScaledReal(other)
        return ScaledReal._raw(*kernels.add(self.mantissa, self.exponent,
                                            other.mantissa, other.exponent))

    __radd__ = __add__

    def __neg__(self):
        return ScaledReal._raw(-self.mantissa, self.exponent)

    def __sub__(self, other):
        if not isinstance(other, ScaledReal):
            other = ScaledReal(other)
        return self + (-other)

    def __rsub__(self, other):
        return ScaledReal(other) + (-self)

    def __abs__(self):
        return ScaledReal._raw(abs(self.mantissa), self.exponent)

    def cmp_magnitude(self, other):
        """-1/0/+1 comparison of |self| against |other|."""
        if self.is_zero():
            return 0 if other.is_zero() else -1
        if other.is_zero():
            return 1
        a = (self.exponent, abs(self.mantissa))
        b = (other.exponent, abs(other.mantissa))
        return (a > b) - (a < b)

    def log2_abs(self):
        if self.is_zero():
            raise DomainError("log of zero")
        return math.log2(abs(self.mantissa)) + self.exponent

    def __repr__(self):
        return f"ScaledReal({self.mantissa!r}, {self.exponent!r})"

    def __eq__(self, other):
        if isinstance(other, ScaledReal):
            return (self.mantissa, self.exponent) == (other.mantissa, other.exponent)
        return self.to_float() == other

    def __hash__(self):
        return hash((self.mantissa, self.exponent))


def normalize(mantissa, exponent=0):
    """Canonical ScaledReal for mantissa * 2**exponent."""
    return ScaledReal(mantissa, exponent)


def pow_scaled(base, exponent):
    """base**exponent for base in (0, 1] and integer exponent >= 0.

    Binary exponentiation: the relative error is bounded by the number of
    mantissa multiplications (about 2*log2(exponent)) times machine epsilon.
    """
    if not 0.0 < base <= 1.0:
        raise DomainError(f"base {base!r} outside (0, 1]")
    if exponent < 0 or int(exponent) != exponent:
        raise DomainError(f"exponent {exponent!r} is not a non-negative integer")
    return ScaledReal._raw(*kernels.pow_scaled(float(base), int(exponent)))


class ScaledMatrix:
    """Dense row-major matrix of ScaledReal values."""

    __slots__ = ("rows", "cols", "mant", "expo")

    def __init__(self, rows, cols):
        if rows < 0 or cols < 0:
            raise DomainError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        self.mant = np.zeros(rows * cols, dtype=np.float64)
        self.expo = np.zeros(rows * cols, dtype=np.int64)

    def set(self, i, j, value):
        if not isinstance(value, ScaledReal):
            value = ScaledReal(value)
        k = i * self.cols + j
        self.mant[k] = value.mantissa
        self.expo[k] = value.exponent

    def get(self, i, j):
        k = i * self.cols + j
        return ScaledReal._raw(float(self.mant[k]), int(self.expo[k]))


def det_with_quality(matrix):
    """Determinant plus a conditioning indicator.

    The quality factor is |det| of the column-normalized matrix; values
    below ~1e-10 mean the pivots cancelled almost completely and the
    double-precision result cannot be trusted.
    """
    if matrix.rows != matrix.cols:
        raise DomainError("determinant requires a square matrix")
    dm, de, qm, qe = kernels.det_scaled(matrix.mant, matrix.expo, matrix.rows)
    return ScaledReal._raw(dm, de), ScaledReal._raw(qm, qe)


def det(matrix):
    """Determinant via LU with partial pivoting in scaled arithmetic.

    Columns are pre-scaled to unit max magnitude (the scales are multiplied
    back in); the size-0 determinant is 1.
    """
    value, _ = det_with_quality(matrix)
    return value
