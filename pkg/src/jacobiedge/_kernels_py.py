"""Pure-Python scaled-arithmetic kernels.

Numbers are (mantissa, exponent) pairs representing mantissa * 2**exponent
with |mantissa| in [1, 2) (or exactly 0 with exponent 0).  Keeping the
exponent as a separate integer lets polynomial recurrences and determinant
pivots grow far beyond the double-precision range without overflow.

The compiled extension `_kernels` mirrors this module function for
function; `backend.py` picks whichever is available.
"""

import math

BACKEND_NAME = "python"

# Exponent gap beyond which the smaller addend cannot affect the sum.
_ALIGN_CUTOFF = 1100


def normalize(mant, expo):
    """Return the canonical (mantissa, exponent) form of mant * 2**expo."""
    if mant == 0.0:
        return 0.0, 0
    m, e = math.frexp(mant)  # |m| in [0.5, 1)
    return m * 2.0, e - 1 + expo


def add(am, ae, bm, be):
    if am == 0.0:
        return bm, be
    if bm == 0.0:
        return am, ae
    d = ae - be
    if d >= _ALIGN_CUTOFF:
        return am, ae
    if d <= -_ALIGN_CUTOFF:
        return bm, be
    if d >= 0:
        return normalize(am + math.ldexp(bm, -d), ae)
    return normalize(bm + math.ldexp(am, d), be)


def mul(am, ae, bm, be):
    if am == 0.0 or bm == 0.0:
        return 0.0, 0
    return normalize(am * bm, ae + be)


def div(am, ae, bm, be):
    if am == 0.0:
        return 0.0, 0
    return normalize(am / bm, ae - be)


def pow_scaled(base, exponent):
    """base**exponent for base in (0, 1], by binary exponentiation."""
    rm, re = 1.0, 0
    bm, be = normalize(base, 0)
    k = exponent
    while k:
        if k & 1:
            rm, re = mul(rm, re, bm, be)
        bm, be = mul(bm, be, bm, be)
        k >>= 1
    return rm, re


def legendre(n, y):
    """P_n(y) by the three-term recurrence, as a scaled pair."""
    if y < 0.0:
        m, e = legendre(n, -y)
        return (-m if n & 1 else m), e
    if n == 0:
        return 1.0, 0
    pm, pe = 1.0, 0          # P_0
    cm, ce = normalize(y, 0)  # P_1
    for k in range(1, n):
        # (k+1) P_{k+1} = (2k+1) y P_k - k P_{k-1}
        tm, te = normalize(cm * y * (2 * k + 1), ce)
        sm, se = add(tm, te, -pm * k, pe)
        pm, pe = cm, ce
        cm, ce = normalize(sm / (k + 1), se)
    return cm, ce


def _gen_binom(t, r):
    """Generalized binomial C(t, r) for integer t (possibly negative), r >= 0."""
    out = 1.0
    for s in range(r):
        out *= (t - s) / (s + 1)
    return out


def _jacobi_direct(l, a, b, y):
    """Degree-l Jacobi value by the explicit binomial sum (small l only)."""
    um, ue = normalize(y - 1.0, 0)
    vm, ve = normalize(y + 1.0, 0)
    sm, se = 0.0, 0
    for k in range(l + 1):
        c = _gen_binom(l + a, k) * _gen_binom(l + b, l - k)
        if c == 0.0:
            continue
        tm, te = normalize(c, -l)
        for _ in range(l - k):
            tm, te = mul(tm, te, um, ue)
        for _ in range(k):
            tm, te = mul(tm, te, vm, ve)
        sm, se = add(sm, se, tm, te)
    return sm, se


def jacobi(l, a, b, y):
    """P_l^(a,b)(y) for integer parameters, as a scaled pair."""
    if y < 0.0:
        m, e = jacobi(l, b, a, -y)
        return (-m if l & 1 else m), e
    if l == 0:
        return 1.0, 0
    # The recurrence divides by (l+a+b+1)(2l+a+b); start past any zeros.
    start = 1 if a + b >= -1 else -(a + b)
    if l <= start:
        return _jacobi_direct(l, a, b, y)
    pm, pe = _jacobi_direct(start - 1, a, b, y)
    cm, ce = _jacobi_direct(start, a, b, y)
    for k in range(start, l):
        s = 2 * k + a + b
        denom = 2.0 * (k + 1) * (k + a + b + 1) * s
        cy = float(s * (s + 1) * (s + 2))
        c0 = float((s + 1) * (a * a - b * b))
        cp = 2.0 * (k + a) * (k + b) * (s + 2)
        tm, te = normalize(cm * (cy * y + c0), ce)
        tm, te = add(tm, te, -cp * pm, pe)
        pm, pe = cm, ce
        cm, ce = normalize(tm / denom, te)
    return cm, ce


def legendre_deriv(n, k, y):
    """k-th derivative of P_n at y: prefactor times a degree-(n-k) Jacobi value."""
    if k == 0:
        return legendre(n, y)
    if k > n:
        return 0.0, 0
    fm, fe = 1.0, 0
    for t in range(1, k + 1):
        fm, fe = normalize(fm * (n + t), fe - 1)
    jm, je = jacobi(n - k, k, k, y)
    return mul(fm, fe, jm, je)


def det_scaled(mant, expo, nn):
    """Determinant of an nn-by-nn scaled matrix (row-major pair arrays).

    Each column is rescaled by its max-magnitude entry before the LU
    elimination, and the scales are multiplied back into the result;
    columns of these matrices differ by large powers of the polynomial
    degree, and unscaled pivoting loses the low-order columns entirely.

    Returns (mant, expo, qual_mant, qual_expo) where the quality factor is
    |det| of the column-normalized matrix: a small value signals
    cancellation rather than a genuinely tiny determinant.
    """
    if nn == 0:
        return 1.0, 0, 1.0, 0
    am = [[float(mant[i * nn + j]) for j in range(nn)] for i in range(nn)]
    ae = [[int(expo[i * nn + j]) for j in range(nn)] for i in range(nn)]

    scale_m, scale_e = 1.0, 0
    for j in range(nn):
        bi, bm_, be_ = -1, 0.0, 0
        for i in range(nn):
            m_, e_ = am[i][j], ae[i][j]
            if m_ != 0.0 and (bi < 0 or (e_, abs(m_)) > (be_, abs(bm_))):
                bi, bm_, be_ = i, abs(m_), e_
        if bi < 0:
            return 0.0, 0, 1.0, 0  # zero column: determinant is exactly 0
        scale_m, scale_e = mul(scale_m, scale_e, bm_, be_)
        for i in range(nn):
            if am[i][j] != 0.0:
                am[i][j], ae[i][j] = div(am[i][j], ae[i][j], bm_, be_)

    sign = 1.0
    for kcol in range(nn):
        piv, pm_, pe_ = -1, 0.0, 0
        for i in range(kcol, nn):
            m_, e_ = am[i][kcol], ae[i][kcol]
            if m_ != 0.0 and (piv < 0 or (e_, abs(m_)) > (pe_, abs(pm_))):
                piv, pm_, pe_ = i, abs(m_), e_
        if piv < 0:
            return 0.0, 0, 1.0, 0
        if piv != kcol:
            am[kcol], am[piv] = am[piv], am[kcol]
            ae[kcol], ae[piv] = ae[piv], ae[kcol]
            sign = -sign
        pm_, pe_ = am[kcol][kcol], ae[kcol][kcol]
        for i in range(kcol + 1, nn):
            if am[i][kcol] == 0.0:
                continue
            fm, fe = div(am[i][kcol], ae[i][kcol], pm_, pe_)
            am[i][kcol] = 0.0
            ae[i][kcol] = 0
            for j in range(kcol + 1, nn):
                if am[kcol][j] == 0.0:
                    continue
                tm, te = mul(fm, fe, am[kcol][j], ae[kcol][j])
                am[i][j], ae[i][j] = add(am[i][j], ae[i][j], -tm, te)

    qm, qe = 1.0, 0
    for kcol in range(nn):
        qm, qe = mul(qm, qe, am[kcol][kcol], ae[kcol][kcol])
        if qm == 0.0:
            return 0.0, 0, 1.0, 0
    rm, re = mul(qm * sign, qe, scale_m, scale_e)
    return rm, re, abs(qm), qe
