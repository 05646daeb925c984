"""Explicit isotropic vectors over function-field towers.

The search fixes a support, picks one coordinate to be solved by an exact
square root and draws the other coordinates from tiers of small polynomial
candidates.  Candidates are screened modulo a prime at random points (via the
``residue_filter`` kernel) before the exact test, so a returned vector is
always exactly verified while a miss only means ``unknown``.
"""

from itertools import combinations
import os
import random

import numpy as np
from sympy import nextprime

from .. import kernels
from ..fields import Scalar, sqrt

DEFAULT_BUDGET = int(os.environ.get("OUTERFORMS_SEARCH_BUDGET", "4000000"))
MAX_SUPPORT = 4
N_POINTS = 20


def _prime_1_mod_4(start):
    p = nextprime(start)
    while p % 4 != 1:
        p = nextprime(p)
    return p


_P = _prime_1_mod_4(1 << 20)
_IOTA = next(pow(g, (_P - 1) // 4, _P) for g in range(2, 100) if pow(g, (_P - 1) // 2, _P) == _P - 1)
_QR = np.zeros(_P, dtype=np.uint8)
_QR[(np.arange(_P, dtype=np.int64) ** 2) % _P] = 1


class _Evaluator:
    """Values of tower elements mod p at a fixed set of random points."""

    def __init__(self, tower, seed=0):
        self.tower = tower
        rng = random.Random(seed)
        self.points = [[rng.randrange(2, _P - 1) for _ in tower.vars] for _ in range(N_POINTS)]

    def _coeff(self, c):
        if self.tower.gaussian:
            x = int(c.x.numerator) * pow(int(c.x.denominator), -1, _P)
            y = int(c.y.numerator) * pow(int(c.y.denominator), -1, _P)
            return (x + y * _IOTA) % _P
        return int(c.numerator) * pow(int(c.denominator), -1, _P) % _P

    def poly(self, p):
        out = []
        for pt in self.points:
            total = 0
            for monom, coeff in p.terms():
                term = self._coeff(coeff)
                for val, e in zip(pt, monom):
                    if e:
                        term = term * pow(val, e, _P) % _P
                total += term
            out.append(total % _P)
        return np.array(out, dtype=np.int64)

    def scalar(self, x):
        num = self.poly(x.v.numer)
        den = self.poly(x.v.denom)
        if not den.all():
            return None
        inv = np.array([pow(int(d), -1, _P) for d in den], dtype=np.int64)
        return num * inv % _P


def _monomials(nvars, max_total, max_each=2):
    mons = []

    def rec(i, cur, total):
        if i == nvars:
            mons.append(tuple(cur))
            return
        for e in range(0, max_each + 1):
            if total + e > max_total:
                break
            rec(i + 1, cur + [e], total + e)

    rec(0, [], 0)
    mons.sort(key=lambda m: (sum(m), tuple(-e for e in m)))
    return mons


def candidate_tiers(tower, used_vars):
    """Deterministic tiers of candidate coordinates (as Scalars)."""
    idx = [tower.vars.index(v) for v in used_vars]
    gens = tower.gens()
    mons = _monomials(len(idx), 2)

    def mono(m):
        s = tower.one()
        for i, e in zip(idx, m):
            if e:
                s = s * gens[i] ** e
        return s

    monos = [mono(m) for m in mons]
    if tower.gaussian:
        unit_coeffs = [tower.one(), tower.sqrt_minus_one()]
        lead = unit_coeffs + [tower.scalar(2), 2 * tower.sqrt_minus_one(), 1 + tower.sqrt_minus_one()]
        second = unit_coeffs + [-c for c in unit_coeffs]
    else:
        lead = [tower.one(), tower.scalar(2), tower.scalar(3)]
        second = [tower.one(), -tower.one()]
    tier1 = [c * m for m in monos for c in lead]
    tier2 = []
    for a, b in combinations(range(len(monos)), 2):
        for c in second:
            tier2.append(monos[a] + c * monos[b])
    lin_terms = [(i, c * gens[i]) for i in idx for c in second]
    tier3 = []
    for (i, u), (j, w) in combinations(lin_terms, 2):
        if i != j:
            tier3.append((1 + u) * (1 + w))
    seen, dedup = set(), []
    for cand in tier3:
        key = str(cand)
        if key not in seen and not cand.is_zero():
            seen.add(key)
            dedup.append(cand)
    return [tier1, tier2, dedup]


class _Budget:
    def __init__(self, total):
        self.left = total

    def spend(self, n):
        self.left -= n
        return self.left >= 0


def find_isotropic_vector(form, fixed=None, budget=None, max_tier=3, seed=0):
    """Exact isotropic vector of ``form`` or None.

    With ``fixed`` set, that coordinate is forced to 1 (used for
    representations).  The result is verified before being returned.
    """
    tower = form.tower
    entries = list(form.entries)
    n = len(entries)
    budget = _Budget(DEFAULT_BUDGET if budget is None else budget)
    one = tower.one()

    def exact(vec):
        if all(x.is_zero() for x in vec):
            return None
        return vec if form.evaluate(vec).is_zero() else None

    # supports without free coordinates
    for s in range(n):
        for f in ([fixed] if fixed is not None else range(n)):
            if f == s:
                continue
            r = sqrt(-entries[f] / entries[s])
            if r is not None:
                vec = [tower.zero()] * n
                vec[f], vec[s] = one, r
                if exact(vec):
                    return vec
    used = set()
    for e in entries:
        used.update(e.variables())
    used_vars = [v for v in tower.vars if v in used]
    ev = _Evaluator(tower, seed)
    ent_mod = [ev.scalar(e) for e in entries]
    if any(v is None for v in ent_mod) or not all(v.all() for v in ent_mod):
        ev = _Evaluator(tower, seed + 1)
        ent_mod = [ev.scalar(e) for e in entries]
        if any(v is None for v in ent_mod):
            return None
    inv_mod = [np.array([pow(int(x), -1, _P) if x else 0 for x in v], dtype=np.int64) for v in ent_mod]
    tiers = candidate_tiers(tower, used_vars)[:max_tier]
    pool, pool_mod = [], []
    for tier in tiers:
        for c in tier:
            pool.append(c)
            pool_mod.append(ev.scalar(c))
        cand_vals = np.array(pool_mod, dtype=np.int64)
        for size in range(2, min(n, MAX_SUPPORT) + 1):
            for support in combinations(range(n), size):
                if fixed is not None and fixed not in support:
                    continue
                for s in support:
                    if s == fixed:
                        continue
                    free = [i for i in support if i != s and i != fixed]
                    if not free:
                        continue
                    vec = _search_support(entries, ent_mod, inv_mod, s, free, fixed, pool, cand_vals, budget, exact, tower)
                    if vec is not None:
                        return vec
                    if budget.left < 0:
                        return None
    return None


def _search_support(entries, ent_mod, inv_mod, s, free, fixed, pool, cand_vals, budget, exact, tower):
    n = len(entries)
    target = (-ent_mod[fixed]) % _P if fixed is not None else np.zeros(N_POINTS, dtype=np.int64)
    if not ent_mod[s].all():
        return None
    m = len(free)
    C = len(pool)
    if m > 3:
        return None
    if m == 3:
        if not budget.spend(C ** 3):
            return None
        for a in range(C):
            t = (target - ent_mod[free[0]] * (cand_vals[a] * cand_vals[a] % _P)) % _P
            hits = kernels.residue_filter(cand_vals, np.stack([ent_mod[free[1]], ent_mod[free[2]]]), t, inv_mod[s], _QR, _P, 64)
            for (b, c) in hits:
                vec = _assemble(entries, s, free, fixed, [pool[a], pool[b], pool[c]], tower, exact)
                if vec is not None:
                    return vec
        return None
    if not budget.spend(C ** m):
        return None
    coef = np.stack([ent_mod[i] for i in free])
    hits = kernels.residue_filter(cand_vals, coef, target, inv_mod[s], _QR, _P, 256)
    for idxs in hits:
        vec = _assemble(entries, s, free, fixed, [pool[i] for i in idxs], tower, exact)
        if vec is not None:
            return vec
    return None


def _assemble(entries, s, free, fixed, values, tower, exact):
    n = len(entries)
    vec = [tower.zero()] * n
    acc = tower.zero()
    if fixed is not None:
        vec[fixed] = tower.one()
        acc = acc + entries[fixed]
    for i, v in zip(free, values):
        vec[i] = v
        acc = acc + entries[i] * v * v
    r = sqrt(-acc / entries[s])
    if r is None:
        return None
    vec[s] = r
    return exact(vec)
