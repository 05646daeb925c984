# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from ._pykernels import _isotropic_search_bigint

cnp.import_array()

ctypedef long long i64


cdef inline i64 _isqrt(i64 t):
    cdef i64 s = <i64>sqrt(<double>t)
    while s * s > t:
        s -= 1
    while (s + 1) * (s + 1) <= t:
        s += 1
    return s


def isotropic_search(coeffs, int bound):
    cdef list cs = [int(v) for v in coeffs]
    cdef int n = len(cs)
    if n < 2:
        return None
    if max(abs(v) for v in cs) * n * bound * bound >= 2**62:
        return _isotropic_search_bigint(cs, bound)
    cdef i64 c[16]
    if n > 16:
        return _isotropic_search_bigint(cs, bound)
    cdef int idx
    for idx in range(n):
        c[idx] = cs[idx]
    cdef i64 x[16]
    cdef i64 acc
    cdef i64 last = c[n - 1]
    cdef i64 b2 = <i64>bound * bound
    cdef int h = n - 1
    cdef int level
    cdef i64 r, t, s
    cdef bint any_nonzero
    for idx in range(h):
        x[idx] = 0
    # odometer over the first h coordinates, most significant first
    while True:
        acc = 0
        any_nonzero = False
        for idx in range(h):
            acc += c[idx] * x[idx] * x[idx]
            if x[idx]:
                any_nonzero = True
        r = -acc
        if r % last == 0:
            t = r // last
            if t >= 0 and t <= b2:
                s = _isqrt(t)
                if s * s == t and (s or any_nonzero):
                    return tuple(int(x[i]) for i in range(h)) + (int(s),)
        level = h - 1
        while level >= 0:
            x[level] += 1
            if x[level] <= bound:
                break
            x[level] = 0
            level -= 1
        if level < 0:
            return None


def residue_filter(cand_vals, coef_free, target, inv_solved, qr, i64 p, int limit):
    cdef cnp.ndarray[i64, ndim=2] cv = np.ascontiguousarray(np.asarray(cand_vals, dtype=np.int64) % p)
    cdef cnp.ndarray[i64, ndim=2] cf = np.ascontiguousarray(np.asarray(coef_free, dtype=np.int64) % p)
    cdef cnp.ndarray[i64, ndim=1] tg = np.ascontiguousarray(np.asarray(target, dtype=np.int64) % p)
    cdef cnp.ndarray[i64, ndim=1] inv = np.ascontiguousarray(np.asarray(inv_solved, dtype=np.int64) % p)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] q = np.ascontiguousarray(np.asarray(qr, dtype=np.uint8))
    cdef Py_ssize_t C = cv.shape[0], P = cv.shape[1], m = cf.shape[0]
    cdef Py_ssize_t i, j, k
    cdef i64 r
    cdef bint ok
    cdef cnp.ndarray[i64, ndim=2] sq = cv * cv % p
    cdef cnp.ndarray[i64, ndim=2] t1 = np.ascontiguousarray(cf[0][None, :] * sq % p)
    cdef cnp.ndarray[i64, ndim=2] t2
    out = []
    if m == 1:
        for i in range(C):
            ok = True
            for k in range(P):
                r = (tg[k] - t1[i, k]) % p
                if r < 0:
                    r += p
                r = r * inv[k] % p
                if not q[r]:
                    ok = False
                    break
            if ok:
                out.append((i,))
                if len(out) >= limit:
                    return out
        return out
    if m != 2:
        raise ValueError("m must be 1 or 2")
    t2 = np.ascontiguousarray(cf[1][None, :] * sq % p)
    for i in range(C):
        for j in range(C):
            ok = True
            for k in range(P):
                r = (tg[k] - t1[i, k] - t2[j, k]) % p
                if r < 0:
                    r += p
                r = r * inv[k] % p
                if not q[r]:
                    ok = False
                    break
            if ok:
                out.append((i, j))
                if len(out) >= limit:
                    return out
    return out
