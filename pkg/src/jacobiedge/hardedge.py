"""Hard-edge limit laws, finite-size corrections and expansion checks.

The limit CDF is 1 - e^{-x} det[I_{i-j}(sqrt(4x))] with a Toeplitz matrix
of modified Bessel values whose size is the relevant alpha; the
first-order finite-n correction adds (alpha1+alpha2)/n * x * density.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import bessel
from .backend import kernels
from .errors import DomainError
from .numerics import ScaledMatrix, ScaledReal, det_with_quality

# For larger x the limit CDF equals 1 far below double precision and the
# Bessel argument would leave the supported window.
_X_SATURATED = 625.0

# Below this pivot-product quality the Bessel Toeplitz determinant has
# cancelled too far for double precision (~ 20 digits go missing already
# by z = 14 at size 6) and is recomputed at 40 digits.
_DET_QUALITY_FLOOR = math.log2(1e-8)


def _toeplitz_det(alpha, x, shift):
    z = math.sqrt(4.0 * x)
    vals = {}
    mat = ScaledMatrix(alpha, alpha)
    for i in range(alpha):
        for j in range(alpha):
            order = abs(shift + i - j)
            if order not in vals:
                vals[order] = bessel.bessel_i(order, z)
            mat.set(i, j, ScaledReal(vals[order]))
    value, quality = det_with_quality(mat)
    if quality.is_zero() or quality.log2_abs() >= _DET_QUALITY_FLOOR:
        return value.to_float()
    import mpmath as mp
    with mp.workdps(40):
        zm = mp.sqrt(4 * mp.mpf(x))
        m = mp.matrix(alpha, alpha)
        for i in range(alpha):
            for j in range(alpha):
                m[i, j] = mp.besseli(abs(shift + i - j), zm)
        return float(mp.det(m))


def limit_survival(alpha, x):
    """1 - limit_cdf as the bare product e^{-x} det[I_{i-j}(sqrt(4x))].

    Carries full relative accuracy even deep in the upper tail, where the
    CDF itself saturates at 1.
    """
    if x < 0.0:
        raise DomainError("hard-edge coordinate must be >= 0")
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if x > _X_SATURATED:
        return 0.0
    if alpha == 0:
        return math.exp(-x)
    return math.exp(-x) * _toeplitz_det(alpha, x, 0)


def limit_cdf(alpha, x):
    """Limiting CDF of the n^2-scaled extreme eigenvalue, size-alpha law."""
    return 1.0 - limit_survival(alpha, x)


def limit_pdf(alpha, x):
    """Density of the limiting law: e^{-x} det[I_{2+i-j}(sqrt(4x))]."""
    if x < 0.0:
        raise DomainError("hard-edge coordinate must be >= 0")
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if x > _X_SATURATED:
        return 0.0
    if alpha == 0:
        return math.exp(-x)
    return math.exp(-x) * _toeplitz_det(alpha, x, 2)


class CorrectedCDF(NamedTuple):
    value: float
    proven: bool


def correction_is_proven(alpha1, alpha2, edge):
    """Whether the first-order correction is proved for this case.

    Smallest edge: alpha1 in {0,1} with any alpha2, plus alpha1=2 with
    alpha2 in {0,1,2}.  The largest edge mirrors with the roles swapped.
    Everything else carries the same formula as a conjecture.
    """
    if edge == "smallest":
        lead, other = alpha1, alpha2
    elif edge == "largest":
        lead, other = alpha2, alpha1
    else:
        raise DomainError("edge must be 'smallest' or 'largest'")
    return lead in (0, 1) or (lead == 2 and other in (0, 1, 2))


def corrected_cdf(params, x, edge="smallest"):
    """Limit CDF plus the (alpha1+alpha2)/n first-order term, with flag."""
    if x < 0.0:
        raise DomainError("hard-edge coordinate must be >= 0")
    alpha = params.alpha1 if edge == "smallest" else params.alpha2
    if edge not in ("smallest", "largest"):
        raise DomainError("edge must be 'smallest' or 'largest'")
    total = params.alpha1 + params.alpha2
    value = limit_cdf(alpha, x) + (total / params.n) * x * limit_pdf(alpha, x)
    return CorrectedCDF(value, correction_is_proven(params.alpha1, params.alpha2, edge))


def jue_corrected_cdf(params, x):
    """Corrected law for the smallest eigenvalue in [-1, 1] coordinates."""
    if x < 0.0:
        raise DomainError("hard-edge coordinate must be >= 0")
    total = params.alpha1 + params.alpha2
    return limit_cdf(params.alpha1, x / 2.0) + \
        (total / (2.0 * params.n)) * x * limit_pdf(params.alpha1, x / 2.0)


def lue_reference_cdf(alpha, n, x):
    """Finite-n smallest-eigenvalue reference curve for the Laguerre case."""
    if x < 0.0:
        raise DomainError("hard-edge coordinate must be >= 0")
    return limit_cdf(alpha, x / 2.0) + (alpha / (2.0 * n)) * x * limit_pdf(alpha, x / 2.0)


def scaled_correction_density(alpha1, alpha2, x):
    """e^x (alpha1+alpha2) d/dx [x * limit_pdf(alpha1, x)].

    Closed forms are coded for alpha1 <= 2; larger sizes fall back to
    central differences of the Bessel-determinant density.
    """
    if x <= 0.0:
        raise DomainError("requires x > 0")
    total = alpha1 + alpha2
    if alpha1 == 0:
        return total * (1.0 - x)
    z = math.sqrt(4.0 * x)
    if alpha1 == 1:
        i0 = bessel.bessel_i(0, z)
        i1 = bessel.bessel_i(1, z)
        return total * (2.0 * math.sqrt(x) * i1 - x * i0)
    if alpha1 == 2:
        i0 = bessel.bessel_i(0, z)
        i1 = bessel.bessel_i(1, z)
        first = (1.0 - x) * (i0 * i0 - (1.0 + 1.0 / x) * i1 * i1)
        second = x * (i1 * i1 * (1.0 / x + 2.0 / x ** 2)
                      - 2.0 / (x * math.sqrt(x)) * i0 * i1)
        return total * (first + second)
    h = 1e-6 * max(1.0, x)
    up = (x + h) * limit_pdf(alpha1, x + h)
    dn = (x - h) * limit_pdf(alpha1, x - h)
    return math.exp(x) * total * (up - dn) / (2.0 * h)


def bessel_expansion_residuals(m, c, n, x):
    """Residuals of the two-term Bessel expansions of Legendre derivatives.

    Both residuals vanish like O(1/n^2): the first compares
    n^{-2m} d^m P_{n+c} at (1+x/n^2)/(1-x/n^2) against
    I_m(sqrt(4x))/(4x)^{m/2} + (1+2c)/(2n) * I_{m-1}(sqrt(4x))/(4x)^{(m-1)/2};
    the second compares the associated-polynomial magnitude (the constant
    complex phase of the y > 1 continuation is removed analytically, so the
    comparison stays real) against I_m + (1+2c)/n * sqrt(x) * I_{m-1}.
    """
    if m < 0:
        raise DomainError("derivative order must be >= 0")
    if n < max(8, 2 * m):
        raise DomainError("n too small for the expansion window")
    if x < 0.0 or (x == 0.0 and m > 0):
        raise DomainError("x must be positive (x = 0 allowed only for m = 0)")
    u = x / (n * n)
    y = (1.0 + u) / (1.0 - u)
    z = math.sqrt(4.0 * x)
    deriv = ScaledReal._raw(*kernels.legendre_deriv(n + c, m, y))
    scale = ScaledReal(1.0)
    for _ in range(2 * m):
        scale = scale / ScaledReal(float(n))
    lead = bessel.bessel_i(m, z)
    sub = bessel.bessel_i(m - 1, z)
    if x > 0.0:
        expansion = lead / (4.0 * x) ** (m / 2.0) \
            + (1 + 2 * c) / (2.0 * n) * sub / (4.0 * x) ** ((m - 1) / 2.0)
    else:
        expansion = lead  # m = 0: the I_{m-1} term carries sqrt(4x) = 0
    residual_deriv = (scale * deriv).to_float() - expansion

    y2m1 = 4.0 * u / (1.0 - u) ** 2  # y^2 - 1 without cancellation
    assoc = ScaledReal(y2m1 ** (m / 2.0)) * deriv
    for _ in range(m):
        assoc = assoc / ScaledReal(float(n))
    residual_assoc = assoc.to_float() - (lead + (1 + 2 * c) / n * math.sqrt(x) * sub)
    return residual_deriv, residual_assoc
