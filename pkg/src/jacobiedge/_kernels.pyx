# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scaled-arithmetic kernels; same contract as _kernels_py.

Numbers are (mantissa, exponent) pairs with |mantissa| in [1, 2) or exact
zero.  These loops dominate the exact-distribution evaluation time, which
is why they exist in compiled form; the Python module is the fallback.
"""

from libc.math cimport frexp, ldexp, fabs
from libc.stdlib cimport malloc, free

import numpy as np

BACKEND_NAME = "compiled"

cdef long _ALIGN_CUTOFF = 1100


cdef struct SV:
    double m
    long e


cdef inline SV _norm(double mant, long expo) noexcept nogil:
    cdef SV out
    cdef int k
    if mant == 0.0:
        out.m = 0.0
        out.e = 0
        return out
    out.m = 2.0 * frexp(mant, &k)
    out.e = expo + k - 1
    return out


cdef inline SV _add(SV a, SV b) noexcept nogil:
    cdef long d
    if a.m == 0.0:
        return b
    if b.m == 0.0:
        return a
    d = a.e - b.e
    if d >= _ALIGN_CUTOFF:
        return a
    if d <= -_ALIGN_CUTOFF:
        return b
    if d >= 0:
        return _norm(a.m + ldexp(b.m, -<int>d), a.e)
    return _norm(b.m + ldexp(a.m, <int>d), b.e)


cdef inline SV _mul(SV a, SV b) noexcept nogil:
    cdef SV out
    if a.m == 0.0 or b.m == 0.0:
        out.m = 0.0
        out.e = 0
        return out
    return _norm(a.m * b.m, a.e + b.e)


cdef inline SV _div(SV a, SV b) noexcept nogil:
    cdef SV out
    if a.m == 0.0:
        out.m = 0.0
        out.e = 0
        return out
    return _norm(a.m / b.m, a.e - b.e)


cdef inline SV _scale(SV a, double c) noexcept nogil:
    if a.m == 0.0 or c == 0.0:
        return _norm(0.0, 0)
    return _norm(a.m * c, a.e)


def normalize(double mant, long expo):
    cdef SV v = _norm(mant, expo)
    return v.m, v.e


def add(double am, long ae, double bm, long be):
    cdef SV a, b, c
    a.m, a.e = am, ae
    b.m, b.e = bm, be
    c = _add(a, b)
    return c.m, c.e


def mul(double am, long ae, double bm, long be):
    cdef SV a, b, c
    a.m, a.e = am, ae
    b.m, b.e = bm, be
    c = _mul(a, b)
    return c.m, c.e


def div(double am, long ae, double bm, long be):
    cdef SV a, b, c
    a.m, a.e = am, ae
    b.m, b.e = bm, be
    c = _div(a, b)
    return c.m, c.e


def pow_scaled(double base, object exponent):
    cdef SV r, b
    cdef unsigned long long k = exponent
    r = _norm(1.0, 0)
    b = _norm(base, 0)
    while k:
        if k & 1:
            r = _mul(r, b)
        b = _mul(b, b)
        k >>= 1
    return r.m, r.e


cdef SV _legendre(long n, double y) noexcept nogil:
    cdef SV prev, cur, t
    cdef long k
    cdef double sign = 1.0
    if y < 0.0:
        if n & 1:
            sign = -1.0
        y = -y
    if n == 0:
        return _norm(sign, 0)
    prev = _norm(1.0, 0)
    cur = _norm(y, 0)
    for k in range(1, n):
        t = _norm(cur.m * y * (2 * k + 1), cur.e)
        t = _add(t, _norm(-prev.m * k, prev.e))
        prev = cur
        cur = _norm(t.m / (k + 1), t.e)
    return _scale(cur, sign)


def legendre(long n, double y):
    cdef SV v = _legendre(n, y)
    return v.m, v.e


cdef double _gen_binom(long t, long r) noexcept nogil:
    cdef double out = 1.0
    cdef long s
    for s in range(r):
        out *= (<double>(t - s)) / (s + 1)
    return out


cdef SV _jacobi_direct(long l, long a, long b, double y) noexcept nogil:
    cdef SV u, v, t, acc
    cdef long k, q
    cdef double c
    u = _norm(y - 1.0, 0)
    v = _norm(y + 1.0, 0)
    acc = _norm(0.0, 0)
    for k in range(l + 1):
        c = _gen_binom(l + a, k) * _gen_binom(l + b, l - k)
        if c == 0.0:
            continue
        t = _norm(c, -l)
        for q in range(l - k):
            t = _mul(t, u)
        for q in range(k):
            t = _mul(t, v)
        acc = _add(acc, t)
    return acc


cdef SV _jacobi(long l, long a, long b, double y) noexcept nogil:
    cdef SV prev, cur, t
    cdef long k, s, start, swap
    cdef double sign = 1.0, denom, cy, c0, cp
    if y < 0.0:
        if l & 1:
            sign = -1.0
        y = -y
        swap = a
        a = b
        b = swap
    if l == 0:
        return _norm(sign, 0)
    start = 1 if a + b >= -1 else -(a + b)
    if l <= start:
        return _scale(_jacobi_direct(l, a, b, y), sign)
    prev = _jacobi_direct(start - 1, a, b, y)
    cur = _jacobi_direct(start, a, b, y)
    for k in range(start, l):
        s = 2 * k + a + b
        denom = 2.0 * (k + 1) * (k + a + b + 1) * s
        cy = <double>s * (s + 1) * (s + 2)
        c0 = <double>(s + 1) * (a * a - b * b)
        cp = 2.0 * (k + a) * (k + b) * (s + 2)
        t = _norm(cur.m * (cy * y + c0), cur.e)
        t = _add(t, _norm(-cp * prev.m, prev.e))
        prev = cur
        cur = _norm(t.m / denom, t.e)
    return _scale(cur, sign)


def jacobi(long l, long a, long b, double y):
    cdef SV v = _jacobi(l, a, b, y)
    return v.m, v.e


cdef SV _legendre_deriv(long n, long k, double y) noexcept nogil:
    cdef SV pre
    cdef long t
    if k == 0:
        return _legendre(n, y)
    if k > n:
        return _norm(0.0, 0)
    pre = _norm(1.0, 0)
    for t in range(1, k + 1):
        pre = _norm(pre.m * (n + t), pre.e - 1)
    return _mul(pre, _jacobi(n - k, k, k, y))


def legendre_deriv(long n, long k, double y):
    cdef SV v = _legendre_deriv(n, k, y)
    return v.m, v.e


def det_scaled(mant, expo, long nn):
    """LU determinant with per-column max rescaling; see _kernels_py."""
    cdef double[::1] mv
    cdef long[::1] ev
    cdef SV *a
    cdef SV best, pivot, f, t, scale, q
    cdef long i, j, k, bi
    cdef double sign = 1.0
    if nn == 0:
        return 1.0, 0, 1.0, 0
    mv = np.ascontiguousarray(mant, dtype=np.float64)
    ev = np.ascontiguousarray(expo, dtype=np.int64)
    a = <SV *>malloc(nn * nn * sizeof(SV))
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(nn * nn):
            a[i].m = mv[i]
            a[i].e = ev[i]
        scale = _norm(1.0, 0)
        for j in range(nn):
            bi = -1
            for i in range(nn):
                if a[i * nn + j].m != 0.0:
                    if bi < 0 or _cmp_abs(a[i * nn + j], best) > 0:
                        bi = i
                        best = a[i * nn + j]
            if bi < 0:
                return 0.0, 0, 1.0, 0
            best.m = fabs(best.m)
            scale = _mul(scale, best)
            for i in range(nn):
                if a[i * nn + j].m != 0.0:
                    a[i * nn + j] = _div(a[i * nn + j], best)
        for k in range(nn):
            bi = -1
            for i in range(k, nn):
                if a[i * nn + k].m != 0.0:
                    if bi < 0 or _cmp_abs(a[i * nn + k], pivot) > 0:
                        bi = i
                        pivot = a[i * nn + k]
            if bi < 0:
                return 0.0, 0, 1.0, 0
            if bi != k:
                for j in range(nn):
                    t = a[k * nn + j]
                    a[k * nn + j] = a[bi * nn + j]
                    a[bi * nn + j] = t
                sign = -sign
            pivot = a[k * nn + k]
            for i in range(k + 1, nn):
                if a[i * nn + k].m == 0.0:
                    continue
                f = _div(a[i * nn + k], pivot)
                a[i * nn + k] = _norm(0.0, 0)
                for j in range(k + 1, nn):
                    if a[k * nn + j].m == 0.0:
                        continue
                    t = _mul(f, a[k * nn + j])
                    t.m = -t.m
                    a[i * nn + j] = _add(a[i * nn + j], t)
        q = _norm(1.0, 0)
        for k in range(nn):
            q = _mul(q, a[k * nn + k])
            if q.m == 0.0:
                return 0.0, 0, 1.0, 0
        t = _mul(_norm(q.m * sign, q.e), scale)
        return t.m, t.e, fabs(q.m), q.e
    finally:
        free(a)


cdef inline int _cmp_abs(SV a, SV b) noexcept nogil:
    if a.e != b.e:
        return 1 if a.e > b.e else -1
    if fabs(a.m) > fabs(b.m):
        return 1
    if fabs(a.m) < fabs(b.m):
        return -1
    return 0
