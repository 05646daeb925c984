"""Pure-Python/numpy implementations of the search kernels.

Used when the compiled extension is unavailable, and as its reference.
"""

from math import isqrt

import numpy as np

_INT64_SAFE = 2**62


def isotropic_search(coeffs, bound):
    """First nonnegative integer vector with entries <= bound and sum c_i x_i^2 = 0.

    Vectors are scanned in lexicographic order of the leading n-1
    coordinates; the last coordinate is solved exactly.  Returns a tuple or
    None.
    """
    coeffs = [int(c) for c in coeffs]
    n = len(coeffs)
    if n < 2:
        return None
    if max(abs(c) for c in coeffs) * n * bound * bound >= _INT64_SAFE:
        return _isotropic_search_bigint(coeffs, bound)
    *head, last = coeffs
    b2 = bound * bound
    sq = np.arange(bound + 1, dtype=np.int64) ** 2
    if n == 2:
        return _finish_1d(head[0] * sq, last, b2)
    # loop over all but the final two head coordinates in python, vectorize the last two
    outer = head[:-2]
    c_a, c_b = head[-2], head[-1]
    plane = c_a * sq[:, None] + c_b * sq[None, :]
    ranges = [range(bound + 1)] * len(outer)
    for prefix in _product(ranges):
        base = sum(c * x * x for c, x in zip(outer, prefix))
        r = -(plane + base)
        ok = r % last == 0
        t = np.where(ok, r // last, -1)
        ok &= (t >= 0) & (t <= b2)
        if not ok.any():
            continue
        tt = np.where(ok, t, 0)
        s = np.floor(np.sqrt(tt.astype(np.float64))).astype(np.int64)
        s = np.where(s * s > tt, s - 1, s)
        s = np.where((s + 1) * (s + 1) <= tt, s + 1, s)
        ok &= s * s == tt
        if not any(prefix):
            ok[0, 0] = ok[0, 0] and s[0, 0] != 0
        idx = np.argwhere(ok)
        if idx.size:
            i, j = idx[0]
            return tuple(prefix) + (int(i), int(j), int(s[i, j]))
    return None


def _finish_1d(partial, last, b2):
    r = -partial
    for x, val in enumerate(r.tolist()):
        if val % last:
            continue
        t = val // last
        if 0 <= t <= b2:
            s = isqrt(t)
            if s * s == t and (x or s):
                return (x, s)
    return None


def _product(ranges):
    if not ranges:
        yield ()
        return
    first, *rest = ranges
    for x in first:
        for tail in _product(rest):
            yield (x,) + tail


def _isotropic_search_bigint(coeffs, bound):
    *head, last = coeffs
    b2 = bound * bound
    for prefix in _product([range(bound + 1)] * len(head)):
        s = sum(c * x * x for c, x in zip(head, prefix))
        if (-s) % last:
            continue
        t = -s // last
        if 0 <= t <= b2:
            r = isqrt(t)
            if r * r == t and (r or any(prefix)):
                return tuple(prefix) + (r,)
    return None


def residue_filter(cand_vals, coef_free, target, inv_solved, qr, p, limit):
    """Index tuples of candidates whose solved coordinate is a square mod p.

    ``cand_vals`` is (C, P): candidate values at P evaluation points.
    ``coef_free`` is (m, P) with m in {1, 2}.  For a choice of candidates
    (c_1, ..., c_m) the residual (target - sum coef_k * cand^2) * inv_solved
    must be a square (or zero) mod p at every point.
    """
    cand_vals = np.asarray(cand_vals, dtype=np.int64) % p
    coef_free = np.asarray(coef_free, dtype=np.int64) % p
    target = np.asarray(target, dtype=np.int64) % p
    inv_solved = np.asarray(inv_solved, dtype=np.int64) % p
    qr = np.asarray(qr, dtype=bool)
    m = coef_free.shape[0]
    sq = cand_vals * cand_vals % p
    if m == 1:
        r = (target[None, :] - coef_free[0][None, :] * sq) % p * inv_solved[None, :] % p
        ok = qr[r].all(axis=1)
        return [(int(i),) for i in np.flatnonzero(ok)[:limit]]
    if m != 2:
        raise ValueError("m must be 1 or 2")
    t1 = coef_free[0][None, :] * sq % p
    t2 = coef_free[1][None, :] * sq % p
    out = []
    for i in range(sq.shape[0]):
        r = (target[None, :] - t1[i][None, :] - t2) % p * inv_solved[None, :] % p
        ok = qr[r].all(axis=1)
        for j in np.flatnonzero(ok):
            out.append((i, int(j)))
            if len(out) >= limit:
                return out
    return out
