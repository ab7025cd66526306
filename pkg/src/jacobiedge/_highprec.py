"""31-digit evaluation of the exact-distribution formulas.

This is the escape hatch for the rare parameter regions where the
double-precision determinant ratio loses too many digits to cancellation
(detected at runtime) or where the caller forces the high-precision mode.
mpmath handles the huge dynamic range natively, so no scaled arithmetic
is needed here.
"""

import math

import mpmath as mp

from .orthopoly import pochhammer_int

_DPS = 31


def _legendre(n, y):
    if y < 0:
        return (-1) ** (n % 2) * _legendre(n, -y)
    if n == 0:
        return mp.mpf(1)
    prev, cur = mp.mpf(1), mp.mpf(y)
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1) * y * cur - k * prev) / (k + 1)
    return cur


def _jacobi_direct(l, a, b, y):
    total = mp.mpf(0)
    for k in range(l + 1):
        c = mp.mpf(1)
        for s in range(k):
            c *= mp.mpf(l + a - s) / (s + 1)
        for s in range(l - k):
            c *= mp.mpf(l + b - s) / (s + 1)
        total += c * (y - 1) ** (l - k) * (y + 1) ** k
    return total / mp.mpf(2) ** l


def _jacobi(l, a, b, y):
    if y < 0:
        return (-1) ** (l % 2) * _jacobi(l, b, a, -y)
    if l == 0:
        return mp.mpf(1)
    start = 1 if a + b >= -1 else -(a + b)
    if l <= start:
        return _jacobi_direct(l, a, b, y)
    prev = _jacobi_direct(start - 1, a, b, y)
    cur = _jacobi_direct(start, a, b, y)
    for k in range(start, l):
        s = 2 * k + a + b
        denom = 2 * (k + 1) * (k + a + b + 1) * s
        num = (s + 1) * ((s * (s + 2)) * y + (a * a - b * b)) * cur \
            - 2 * (k + a) * (k + b) * (s + 2) * prev
        prev, cur = cur, num / denom
    return cur


def _legendre_deriv(n, k, y):
    if k == 0:
        return _legendre(n, y)
    if k > n:
        return mp.mpf(0)
    pre = mp.mpf(pochhammer_int(n + 1, k)) / mp.mpf(2) ** k
    return pre * _jacobi(n - k, k, k, y)


def _entry_at_one(n, i, j):
    num = pochhammer_int(n + i - j + 1, 2 * j - 2)
    return mp.mpf(num) / (mp.mpf(2) ** (j - 1) * math.factorial(j - 1))


def legendre_route_cdf(alpha, beta, n, xi, survival=False):
    """High-precision Legendre-determinant smallest-eigenvalue law.

    Returns the CDF, or the survival probability when survival=True.
    """
    with mp.workdps(_DPS):
        xi = mp.mpf(xi)
        size = alpha + beta
        y = (1 + xi) / (1 - xi)
        num = mp.matrix(size, size)
        den = mp.matrix(size, size)
        for i in range(1, size + 1):
            for j in range(1, alpha + 1):
                sign = (-1) ** ((n + i + j) % 2)
                num[i - 1, j - 1] = sign * _legendre_deriv(n + i - 1, j - 1, y)
                den[i - 1, j - 1] = sign * _entry_at_one(n, i, j)
            for j in range(alpha + 1, size + 1):
                e1 = _entry_at_one(n, i, j - alpha)
                num[i - 1, j - 1] = e1
                den[i - 1, j - 1] = e1
        power = (1 - xi) ** (n * n + n * alpha + n * beta + alpha * beta)
        ratio = mp.det(num) / mp.det(den) if size else mp.mpf(1)
        surv = power * ratio
        return float(surv if survival else 1 - surv)


def jacobi_route_cdf(alpha, beta, n, xi, survival=False):
    """High-precision Jacobi-determinant smallest-eigenvalue law."""
    with mp.workdps(_DPS):
        xi = mp.mpf(xi)
        y = (1 + xi) / (1 - xi)
        t = xi / (1 - xi)
        g = mp.matrix(alpha, alpha) if alpha else None
        for i in range(1, alpha + 1):
            for j in range(1, alpha + 1):
                acc = mp.mpf(0)
                for k in range(max(0, i - j), alpha - j + 1):
                    p1 = pochhammer_int(j - i + k + 1, alpha - j - k)
                    if p1 == 0:
                        continue
                    p2 = pochhammer_int(n + alpha + beta - i + 1, k)
                    c = math.comb(alpha - j, k) * (-1) ** k * p1 * p2
                    acc += c * (-t) ** (j - i + k) * _jacobi(
                        n + i - k - 1, alpha + k - i, beta + k - i + 1, y)
                g[i - 1, j - 1] = acc
        pref = mp.mpf(1)
        for k in range(1, alpha + 1):
            pref *= mp.mpf(math.factorial(alpha - k)) / (
                math.factorial(k - 1) * pochhammer_int(n + k, alpha - k))
        power = (1 - xi) ** (n * n + n * alpha + n * beta)
        detg = mp.det(g) if alpha else mp.mpf(1)
        surv = pref * power * detg
        return float(surv if survival else 1 - surv)
