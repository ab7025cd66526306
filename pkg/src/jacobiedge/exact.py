"""Exact finite-n CDFs of the extreme eigenvalues.

Two independent routes are implemented: determinants of Legendre-derivative
matrices (the route used for everything downstream) and determinants of
Jacobi-polynomial combinations (kept as a cross-check oracle).  Both are
expressed through the smallest-eigenvalue law; the largest eigenvalue
follows from the exact duality largest(xi) = 1 - smallest_swapped(1 - xi).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import _highprec
from .backend import kernels
from .errors import DomainError, NumericalQualityError, UnsupportedBranchError
from .numerics import ScaledMatrix, ScaledReal, det_with_quality, pow_scaled
from .orthopoly import pochhammer_int

PRECISION_ENV = "JACOBI_EDGE_PRECISION"

# Escalate to the 31-digit path when the determinant quality drops more
# than this factor below its structural baseline (the same ratio test as
# the conditioning guard, normalized: these matrices have nearly equal
# rows at large n, so their quality is legitimately tiny already, and only
# the data-dependent extra drop signals real cancellation).
_QUALITY_RATIO_LOG2 = math.log2(1e-10)

# CDF values are assembled as 1 - X; below this they have lost too many
# relative digits to the final subtraction and are recomputed at 31 digits.
_TINY_VALUE = 1e-6

# Past this point the distribution is 1 to machine precision and the
# determinant argument (1+xi)/(1-xi) would exceed the reliable range.
_XI_SHORT_CIRCUIT = 1.0 - 1e-14

_CLAMP_SLACK = 1e-9


@dataclass(frozen=True)
class EnsembleParams:
    """Matrix dimension n and the two degree-of-freedom offsets.

    alpha1 = m1 - n and alpha2 = m2 - n, both non-negative integers.
    """

    n: int
    alpha1: int
    alpha2: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be a positive integer")
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise DomainError("alpha1 and alpha2 must be >= 0")

    @property
    def m1(self):
        return self.n + self.alpha1

    @property
    def m2(self):
        return self.n + self.alpha2


MODELS = ("w", "jue", "f")
EDGES = ("smallest", "largest")
METHODS = ("exact-legendre", "exact-jacobi", "asymptotic", "corrected")


@dataclass(frozen=True)
class DistributionQuery:
    """Which distribution to evaluate: model, spectral edge and method."""

    params: EnsembleParams
    model: str = "w"
    edge: str = "smallest"
    method: str = "exact-legendre"

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"model must be one of {MODELS}")
        if self.edge not in EDGES:
            raise DomainError(f"edge must be one of {EDGES}")
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}")


def _resolve_precision(precision):
    mode = precision or os.environ.get(PRECISION_ENV, "double").strip().lower()
    if mode not in ("double", "double-double"):
        raise DomainError(f"unknown precision mode {mode!r}")
    return mode


def _finish(value):
    """Clamp tiny boundary excursions; reject anything larger."""
    if 0.0 <= value <= 1.0:
        return value
    if -_CLAMP_SLACK <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + _CLAMP_SLACK:
        return 1.0
    raise NumericalQualityError(
        f"CDF value {value!r} outside [0, 1] beyond clamping slack; "
        "determinant conditioning failure")


def _entry_at_one(n, i, j):
    """d^{j-1} P_{n+i-1} at y=1: 2^{1-j} (n+i-j+1)_{2j-2} / (j-1)!."""
    num = pochhammer_int(n + i - j + 1, 2 * j - 2)
    if num == 0:
        return ScaledReal()
    val = ScaledReal.from_int(num) / ScaledReal.from_int(math.factorial(j - 1))
    return ScaledReal(val.mantissa, val.exponent + 1 - j)


def _deriv_entry(n, i, j, y):
    """Entry (i, j) of the derivative matrix at argument y, 1-indexed."""
    if y == 1.0:
        return _entry_at_one(n, i, j)
    if y == -1.0:
        e = _entry_at_one(n, i, j)
        return -e if (n + i + j) % 2 else e
    return ScaledReal._raw(*kernels.legendre_deriv(n + i - 1, j - 1, y))


def legendre_deriv_matrix(params, cols, y):
    """(alpha1+alpha2) x cols matrix of Legendre derivatives.

    Entry (i, j) is the (j-1)-th derivative of the degree-(n+i-1) Legendre
    polynomial at y; y = +-1 dispatch to the Pochhammer closed forms.
    """
    rows = params.alpha1 + params.alpha2
    out = ScaledMatrix(rows, cols)
    for i in range(1, rows + 1):
        for j in range(1, cols + 1):
            out.set(i - 1, j - 1, _deriv_entry(params.n, i, j, y))
    return out


def _combined_matrix(alpha, beta, n, y):
    """[E_alpha(y) | E_beta(1)] as one square scaled matrix.

    For y < -1 each left-block entry is evaluated at |y| with the parity
    sign applied, which keeps the recurrence in its monotone regime.
    """
    size = alpha + beta
    out = ScaledMatrix(size, size)
    ay = abs(y)
    for i in range(1, size + 1):
        for j in range(1, alpha + 1):
            e = _deriv_entry(n, i, j, ay)
            if y < 0.0 and (n + i + j) % 2:
                e = -e
            out.set(i - 1, j - 1, e)
        for j in range(1, beta + 1):
            out.set(i - 1, alpha + j - 1, _entry_at_one(n, i, j))
    return out


@lru_cache(maxsize=None)
def _legendre_denominator(n, alpha, beta):
    """det[E_alpha(-1) | E_beta(1)], cached: it does not depend on xi."""
    value, quality = det_with_quality(_combined_matrix(alpha, beta, n, -1.0))
    return value, quality


def _quality_collapsed(quality, baseline):
    """True when quality fell below 1e-10 of the structural baseline."""
    if quality.is_zero():
        return True
    if baseline.is_zero():
        return False
    return quality.log2_abs() - baseline.log2_abs() < _QUALITY_RATIO_LOG2


def _legendre_survival(alpha, beta, n, xi, mode):
    """P(smallest eigenvalue >= xi) to full relative accuracy.

    The survival probability is the bare product
    (1-xi)^(...) * det_num / det_den, so it carries no cancellation and is
    the right quantity to serve the largest edge from.
    """
    if xi <= 0.0:
        return 1.0
    if xi >= _XI_SHORT_CIRCUIT:
        return 0.0
    if mode == "double-double" and n > 100:
        return _highprec.legendre_route_cdf(alpha, beta, n, xi, survival=True)
    y = -(1.0 + xi) / (1.0 - xi)
    num, qn = det_with_quality(_combined_matrix(alpha, beta, n, y))
    den, qd = _legendre_denominator(n, alpha, beta)
    if den.is_zero() or (_quality_collapsed(qn, qd) and not num.is_zero()):
        return _highprec.legendre_route_cdf(alpha, beta, n, xi, survival=True)
    power = pow_scaled(1.0 - xi, n * n + n * alpha + n * beta + alpha * beta)
    return (power * num / den).to_float()


def legendre_route_cdf(alpha, beta, n, xi, precision=None):
    """Smallest-eigenvalue CDF via the Legendre-derivative determinants.

    1 - (1-xi)^(n^2+n*alpha+n*beta+alpha*beta)
      * det[E_alpha(-(1+xi)/(1-xi)) | E_beta(1)] / det[E_alpha(-1) | E_beta(1)]
    """
    if not 0.0 <= xi < 1.0:
        raise DomainError("xi must lie in [0, 1)")
    if xi == 0.0:
        return 0.0
    mode = _resolve_precision(precision)
    value = 1.0 - _legendre_survival(alpha, beta, n, xi, mode)
    if 0.0 < value < _TINY_VALUE or value < 0.0:
        # lost to the final subtraction; redo it in high precision
        return _finish(_highprec.legendre_route_cdf(alpha, beta, n, xi))
    return _finish(value)


def _jacobi_side_matrix(alpha, beta, n, xi):
    y = (1.0 + xi) / (1.0 - xi)
    t = xi / (1.0 - xi)
    g = ScaledMatrix(alpha, alpha)
    for i in range(1, alpha + 1):
        for j in range(1, alpha + 1):
            acc = ScaledReal()
            for k in range(max(0, i - j), alpha - j + 1):
                p1 = pochhammer_int(j - i + k + 1, alpha - j - k)
                if p1 == 0:
                    continue
                p2 = pochhammer_int(n + alpha + beta - i + 1, k)
                coef = math.comb(alpha - j, k) * (-1) ** k * p1 * p2
                term = ScaledReal.from_int((-1) ** (j - i + k) * coef)
                for _ in range(j - i + k):
                    term = term * ScaledReal(t)
                jac = ScaledReal._raw(*kernels.jacobi(
                    n + i - k - 1, alpha + k - i, beta + k - i + 1, y))
                acc = acc + term * jac
            g.set(i - 1, j - 1, acc)
    return g


@lru_cache(maxsize=None)
def _jacobi_baseline_quality(n, alpha, beta):
    """Structural determinant quality of the Jacobi-route matrix near xi=0."""
    _, quality = det_with_quality(_jacobi_side_matrix(alpha, beta, n, 1e-12))
    return quality


def _jacobi_survival(alpha, beta, n, xi, mode):
    """P(smallest eigenvalue >= xi) via the Jacobi-determinant route."""
    if xi <= 0.0:
        return 1.0
    if xi >= _XI_SHORT_CIRCUIT:
        return 0.0
    if mode == "double-double" and n > 100:
        return _highprec.jacobi_route_cdf(alpha, beta, n, xi, survival=True)
    detg, quality = det_with_quality(_jacobi_side_matrix(alpha, beta, n, xi))
    if _quality_collapsed(quality, _jacobi_baseline_quality(n, alpha, beta)) \
            and not detg.is_zero():
        return _highprec.jacobi_route_cdf(alpha, beta, n, xi, survival=True)
    pref = ScaledReal(1.0)
    for k in range(1, alpha + 1):
        pref = pref * ScaledReal.from_int(math.factorial(alpha - k))
        pref = pref / ScaledReal.from_int(
            math.factorial(k - 1) * pochhammer_int(n + k, alpha - k))
    power = pow_scaled(1.0 - xi, n * n + n * alpha + n * beta)
    return (pref * power * detg).to_float()


def jacobi_route_cdf(alpha, beta, n, xi, precision=None):
    """Smallest-eigenvalue CDF via the alpha-dimensional Jacobi determinant.

    Independent of the Legendre route; note the power here is
    (1-xi)^(n^2+n*alpha+n*beta) with no alpha*beta term.
    """
    if not 0.0 <= xi < 1.0:
        raise DomainError("xi must lie in [0, 1)")
    if xi == 0.0:
        return 0.0
    mode = _resolve_precision(precision)
    value = 1.0 - _jacobi_survival(alpha, beta, n, xi, mode)
    if 0.0 < value < _TINY_VALUE or value < 0.0:
        return _finish(_highprec.jacobi_route_cdf(alpha, beta, n, xi))
    return _finish(value)


_ROUTES = {
    "legendre": (legendre_route_cdf, _legendre_survival),
    "exact-legendre": (legendre_route_cdf, _legendre_survival),
    "jacobi": (jacobi_route_cdf, _jacobi_survival),
    "exact-jacobi": (jacobi_route_cdf, _jacobi_survival),
}


def smallest_cdf(params, xi, method="legendre", precision=None):
    """CDF of the smallest eigenvalue at xi in [0, 1]."""
    if not 0.0 <= xi <= 1.0:
        raise DomainError("xi must lie in [0, 1]")
    if xi == 1.0:
        return 1.0
    route, _ = _ROUTES[method]
    return route(params.alpha1, params.alpha2, params.n, xi, precision)


def largest_cdf(params, xi, method="legendre", precision=None):
    """CDF of the largest eigenvalue at xi in [0, 1].

    Equal to the survival probability of the smallest eigenvalue with the
    roles of the alphas swapped, evaluated at 1-xi; serving it from the
    survival product keeps tiny left-tail values relatively accurate.
    """
    if not 0.0 <= xi <= 1.0:
        raise DomainError("xi must lie in [0, 1]")
    if xi == 0.0:
        return 0.0
    _, survival = _ROUTES[method]
    mode = _resolve_precision(precision)
    return _finish(survival(params.alpha2, params.alpha1, params.n, 1.0 - xi, mode))


def corollary_constant(alpha, n):
    """Normalizing constant for the one-sided closed forms (1 when alpha=0)."""
    k_exact = Fraction(1)
    for k in range(alpha):
        k_exact *= Fraction(2 ** k, pochhammer_int(2 * n + 2 * alpha - 2 * k, k))
    return ScaledReal.from_int(k_exact.numerator) / ScaledReal.from_int(k_exact.denominator)


def closed_form_cdf(params, xi, edge):
    """Simplified exact CDFs available when one of the alphas is zero."""
    if not 0.0 <= xi <= 1.0:
        raise DomainError("xi must lie in [0, 1]")
    n, a1, a2 = params.n, params.alpha1, params.alpha2
    if edge == "smallest":
        if a1 == 0:
            if xi == 1.0:
                return 1.0
            return _finish(1.0 - pow_scaled(1.0 - xi, n * n + n * a2).to_float())
        if a2 == 0:
            if xi >= _XI_SHORT_CIRCUIT:
                return 1.0
            y = (1.0 + xi) / (1.0 - xi)
            mat = legendre_deriv_matrix(params, a1, y)
            value, _ = det_with_quality(mat)
            power = pow_scaled(1.0 - xi, n * n + n * a1)
            return _finish(1.0 - (corollary_constant(a1, n) * power * value).to_float())
    elif edge == "largest":
        if a2 == 0:
            if xi == 0.0:
                return 0.0
            return _finish(pow_scaled(xi, n * n + n * a1).to_float())
        if a1 == 0:
            if xi <= 1e-14:
                return 0.0
            y = 2.0 / xi - 1.0
            mat = legendre_deriv_matrix(params, a2, y)
            value, _ = det_with_quality(mat)
            power = pow_scaled(xi, n * n + n * a2)
            return _finish((corollary_constant(a2, n) * power * value).to_float())
    else:
        raise DomainError(f"edge must be one of {EDGES}")
    raise UnsupportedBranchError("closed forms require alpha1 == 0 or alpha2 == 0")


_DOMAINS = {"w": (0.0, 1.0), "jue": (-1.0, 1.0), "f": (0.0, math.inf)}


def _to_unit_interval(model, point):
    lo, hi = _DOMAINS[model]
    if not lo <= point <= hi:
        raise DomainError(f"point {point!r} outside {model} domain [{lo}, {hi}]")
    if model == "w":
        return point
    if model == "jue":
        return (1.0 + point) / 2.0
    return point / (1.0 + point) if math.isfinite(point) else 1.0


def model_cdf(query, point, precision=None):
    """CDF of the requested extreme eigenvalue at a model-native point.

    The point is mapped into the unit-interval coordinates and dispatched
    to the requested evaluation method.
    """
    xi = _to_unit_interval(query.model, point)
    params = query.params
    if query.method in ("exact-legendre", "exact-jacobi"):
        fn = smallest_cdf if query.edge == "smallest" else largest_cdf
        return fn(params, xi, query.method, precision)
    from . import hardedge
    n2 = params.n * params.n
    if query.method == "asymptotic":
        if query.edge == "smallest":
            return hardedge.limit_cdf(params.alpha1, n2 * xi)
        return 1.0 - hardedge.limit_cdf(params.alpha2, n2 * (1.0 - xi))
    if query.edge == "smallest":
        return _finish(hardedge.corrected_cdf(params, n2 * xi, "smallest").value)
    return _finish(1.0 - hardedge.corrected_cdf(params, n2 * (1.0 - xi), "largest").value)


def pdf(query, point, precision=None):
    """Density by Richardson-extrapolated central differences of the CDF."""
    lo, hi = _DOMAINS[query.model]
    h = max(1e-7, 1e-7 * abs(point))
    if not (lo < point - h and point + h < hi):
        raise DomainError("point must be interior to the model domain")

    def central(step):
        up = model_cdf(query, point + step, precision)
        dn = model_cdf(query, point - step, precision)
        return (up - dn) / (2.0 * step)

    d1 = central(h)
    d2 = central(h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def smallest_moments(params):
    """(mean, std) of the smallest eigenvalue; closed form, alpha1 = 0 only."""
    if params.alpha1 != 0:
        raise UnsupportedBranchError("moment closed forms require alpha1 == 0")
    m = params.n * (params.n + params.alpha2)
    mean = 1.0 / (m + 1)
    std = math.sqrt(m / ((1.0 + m) ** 2 * (2.0 + m)))
    return mean, std
