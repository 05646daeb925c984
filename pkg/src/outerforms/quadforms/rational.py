"""Hasse-Minkowski decisions over Q with explicit witnesses."""

from fractions import Fraction
from math import gcd, isqrt

from sympy import symbols
from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

from .. import kernels
from ..errors import CapacityError, InternalConsistencyError, PreconditionError
from ..fields import FieldTower, squarefree_int
from .certificates import LOCAL_TABLE, Certificate, witness_certificate
from .forms import QuadForm
from .local import (
    INF,
    check_place,
    discriminant,
    hasse_invariant,
    local_isotropic,
    relevant_places,
)

SMALL_SEARCH_BOUND = 12
T_SEARCH_LIMIT = 200000

_X, _Y, _Z = symbols("x y z", integer=True)


def _rationals(q):
    if isinstance(q, QuadForm):
        if q.tower.vars:
            raise PreconditionError("form is not over Q")
        return q.rationals()
    return [Fraction(v) for v in q]


def anisotropic_place(entries):
    """A place where the form is locally anisotropic, or None."""
    if len(entries) <= 1:
        return INF
    for v in relevant_places(entries):
        if not local_isotropic(entries, v):
            return v
    return None


def decide_isotropic(entries):
    return anisotropic_place([Fraction(e) for e in entries]) is None


def is_isotropic_Q(q):
    """Return (isotropic, certificate) for a diagonal form over Q."""
    entries = _rationals(q)
    form = QuadForm(entries, FieldTower())
    place = anisotropic_place(entries)
    if place is not None:
        return False, local_certificate(entries, place)
    vec = rational_witness(entries)
    return True, witness_certificate(form, [form.tower.scalar(x) for x in vec])


def local_certificate(entries, place):
    n = len(entries)
    info = {
        "place": str(place),
        "dim": n,
        "discriminant": _frac_str(discriminant(entries)) if n else "1",
        "hasse": hasse_invariant(entries, place) if place != INF else None,
        "locally_isotropic": False,
    }
    form = QuadForm(entries, FieldTower()) if entries else None
    return Certificate(LOCAL_TABLE, "Q", form.strings() if form else [], places=info)


def verify_local_table(cert):
    try:
        entries = [s.as_fraction() for s in cert.form_scalars()]
        place = check_place(cert.places["place"])
    except Exception:
        return False
    return not local_isotropic(entries, place)


def _frac_str(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ------------------------------------------------------------------ witnesses


def _normalize(entries):
    """entries[i] = m_i * s_i^2 with m_i square-free integers; returns (m, s)."""
    ms, ss = [], []
    for a in entries:
        a = Fraction(a)
        n = a.numerator * a.denominator
        m = squarefree_int(n)
        s2 = Fraction(n, m) / (a.denominator * a.denominator)
        r = Fraction(isqrt(s2.numerator), isqrt(s2.denominator))
        assert r * r == s2
        ms.append(m)
        ss.append(r)
    return ms, ss


def rational_witness(entries):
    """Nonzero rational isotropic vector of a form decided isotropic."""
    entries = [Fraction(e) for e in entries]
    ms, ss = _normalize(entries)
    vec = _witness_sqfree(ms)
    out = [Fraction(x) / s for x, s in zip(vec, ss)]
    total = sum(e * x * x for e, x in zip(entries, out))
    if total != 0 or not any(out):
        raise InternalConsistencyError("constructed witness does not vanish")
    g = 0
    den = 1
    for x in out:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in out]
    for x in ints:
        g = gcd(g, x)
    return [Fraction(x // g) for x in ints]


def _check(ms, vec):
    return any(vec) and sum(m * x * x for m, x in zip(ms, vec)) == 0


def _witness_sqfree(ms):
    n = len(ms)
    found = kernels.isotropic_search(ms, SMALL_SEARCH_BOUND)
    if found is not None:
        return list(found)
    if n == 2:
        if ms[0] == -ms[1]:
            return [1, 1]
        raise InternalConsistencyError("binary form is anisotropic")
    if n == 3:
        return _ternary(ms)
    if n == 4:
        return _quaternary(ms)
    return _higher(ms)


def _ternary(ms):
    a, b, c = ms
    g = gcd(gcd(a, b), c)
    try:
        sol = diop_ternary_quadratic_normal((a // g) * _X**2 + (b // g) * _Y**2 + (c // g) * _Z**2)
    except Exception:
        sol = (None, None, None)
    if sol[0] is not None:
        vec = [int(v) for v in sol]
        if _check(ms, vec):
            return vec
    found = kernels.isotropic_search(ms, 400)
    if found is not None:
        return list(found)
    raise CapacityError("ternary witness search", 400)


def _squarefree_candidates(limit):
    for t in range(1, limit + 1):
        if squarefree_int(t) == t:
            yield t
            yield -t


def _binary_pair(ms, i, j):
    if ms[i] == -ms[j]:
        vec = [0] * len(ms)
        vec[i] = vec[j] = 1
        return vec
    return None


def _quaternary(ms):
    pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    for (i, j), (k, l) in pairings:
        for a, b in ((i, j), (k, l)):
            vec = _binary_pair(ms, a, b)
            if vec:
                return vec
    (i, j), (k, l) = pairings[0]
    for t in _squarefree_candidates(T_SEARCH_LIMIT):
        left = [ms[i], ms[j], -t]
        right = [ms[k], ms[l], t]
        if decide_isotropic(left) and decide_isotropic(right):
            x1, x2, w1 = _ternary(left)
            x3, x4, w2 = _ternary(right)
            vec = [0] * 4
            if w1 == 0:
                vec[i], vec[j] = x1, x2
            elif w2 == 0:
                vec[k], vec[l] = x3, x4
            else:
                vec[i], vec[j], vec[k], vec[l] = x1 * w2, x2 * w2, x3 * w1, x4 * w1
            if _check(ms, vec):
                return vec
    raise CapacityError("t search limit", T_SEARCH_LIMIT)


def _higher(ms):
    found = kernels.isotropic_search(ms[:5], 30) if len(ms) > 5 else None
    if found is not None:
        return list(found) + [0] * (len(ms) - 5)
    head, rest = ms[:2], ms[2:]
    vec = _binary_pair(ms, 0, 1)
    if vec:
        return vec
    for t in _squarefree_candidates(T_SEARCH_LIMIT):
        left = head + [-t]
        right = rest + [t]
        if decide_isotropic(left) and decide_isotropic(right):
            x1, x2, w1 = _ternary(left)
            rv = _witness_sqfree(right)
            w2 = rv[-1]
            if w1 == 0:
                vec = [x1, x2] + [0] * len(rest)
            elif w2 == 0:
                vec = [0, 0] + rv[:-1]
            else:
                vec = [x1 * w2, x2 * w2] + [x * w1 for x in rv[:-1]]
            if _check(ms, vec):
                return vec
    raise CapacityError("t search limit", T_SEARCH_LIMIT)
