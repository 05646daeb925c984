"""Rationals with prescribed Hilbert symbols against a list of rationals.

Given a_1..a_n and targets (a_i, mu) = +1 ("split") or (a_i, mu) = Q
("equal-to-Q", meaning (a_i, mu)_v = (a, b)_v at every place), either find
mu or show that no mu exists.  The targets always satisfy the product
formula, so a global mu exists iff one exists locally at every place.  A
local failure is certified by a subset C with prod_{C} a_i a local square
at v and prod_{C} target_v = -1: any mu would give (prod a_i, mu)_v = 1.
"""

from fractions import Fraction
import os

from sympy import nextprime

from ..errors import CapacityError, PreconditionError
from .certificates import RECIPROCITY, Certificate
from .local import (
    INF,
    check_place,
    hilbert_symbol,
    is_local_square,
    legendre,
    local_class_basis,
    local_class_reps,
    prime_support,
)
from .springer import Decision

SPLIT = "split"
EQUAL = "equal-to-Q"
WITNESS = "witness"
EMPTY = "empty"

PRIME_CAP = int(os.environ.get("OUTERFORMS_PRIME_CAP", "40"))
SMALL_MU = 500
AUX_PRIMES = 25
AUX_SCAN = 2000

_ALIASES = {"split": SPLIT, "+": SPLIT, "1": SPLIT, "+1": SPLIT,
            "equal-to-q": EQUAL, "equal": EQUAL, "q": EQUAL, "-": EQUAL, "-1": EQUAL}


def _target(t):
    key = str(t).strip().lower()
    if key not in _ALIASES:
        raise PreconditionError(f"unknown symbol target {t!r}")
    return _ALIASES[key]


def _places(values):
    return [INF] + sorted(prime_support(values) | {2})


def _wanted(targets, a, b, v):
    q = hilbert_symbol(a, b, v)
    return [1 if t == SPLIT else q for t in targets]


def _symbols(avals, mu, v):
    return [hilbert_symbol(x, mu, v) for x in avals]


def check_witness(avals, targets, Q, mu):
    """Exact re-verification of mu at every place where any symbol can be -1."""
    a, b = Q
    mu = Fraction(mu)
    if mu == 0:
        return False
    for v in _places(list(avals) + [a, b, mu]):
        if _symbols(avals, mu, v) != _wanted(targets, a, b, v):
            return False
    return True


def _solve_f2(rows, rhs):
    """One solution x of rows * x = rhs over F2 (rows as int bitmasks), or None."""
    pivots = []
    for r, c in zip(rows, rhs):
        for pr, pc, bit in pivots:
            if r >> bit & 1:
                r ^= pr
                c ^= pc
        if r == 0:
            if c:
                return None
            continue
        bit = r.bit_length() - 1
        pivots = [(pr ^ r, pc ^ c, pb) if pr >> bit & 1 else (pr, pc, pb) for pr, pc, pb in pivots]
        pivots.append((r, c, bit))
    x = 0
    for pr, pc, bit in pivots:
        if pc:
            x |= 1 << bit
    return x


def _local_obstruction(avals, wanted, v):
    """Subset mask C certifying that no local class meets ``wanted`` at v."""
    basis = local_class_basis(v)
    n = len(avals)
    # c . w(r) = 0 for every basis class r, and c . wanted = 1
    rows, rhs = [], []
    for r in basis:
        rows.append(sum(1 << i for i, s in enumerate(_symbols(avals, r, v)) if s == -1))
        rhs.append(0)
    rows.append(sum(1 << i for i in range(n) if wanted[i] == -1))
    rhs.append(1)
    # transpose: unknown is c in F2^n; build equations over the n bits
    return _solve_f2(rows, rhs)


def _locally_solvable(avals, wanted, v):
    return any(_symbols(avals, r, v) == wanted for r in local_class_reps(v))


def _squarefree_order(limit):
    from ..fields import squarefree_int

    yield 1
    yield -1
    for m in range(2, limit + 1):
        if squarefree_int(m) == m:
            yield m
            yield -m


def solve_prescribed_symbols(constraints, Q):
    """Decision(witness, None, mu) or Decision(empty, ReciprocityObstruction)."""
    a, b = (Fraction(x) for x in Q)
    if a == 0 or b == 0:
        raise PreconditionError("quaternion parameters must be nonzero")
    avals = [Fraction(c[0]) for c in constraints]
    targets = [_target(c[1]) for c in constraints]
    if any(x == 0 for x in avals):
        raise PreconditionError("symbol arguments must be nonzero")
    places = _places(avals + [a, b])
    if len(places) - 1 > PRIME_CAP:
        raise CapacityError("prime support", PRIME_CAP, f"{len(places) - 1} primes")
    if not avals:
        return Decision(WITNESS, None, Fraction(1))

    for v in places:
        wanted = _wanted(targets, a, b, v)
        if not _locally_solvable(avals, wanted, v):
            mask = _local_obstruction(avals, wanted, v)
            if mask is None:
                raise PreconditionError("no local class and no obstruction; inconsistent local data")
            cert = obstruction_certificate(avals, targets, (a, b), v, mask)
            return Decision(EMPTY, cert)

    for mu in _squarefree_order(SMALL_MU):
        if check_witness(avals, targets, (a, b), mu):
            return Decision(WITNESS, None, Fraction(mu))

    mu = _linear_search(avals, targets, (a, b), places)
    if mu is not None and check_witness(avals, targets, (a, b), mu):
        return Decision(WITNESS, None, mu)
    raise CapacityError("auxiliary prime search", AUX_SCAN)


def _linear_search(avals, targets, Q, places):
    """mu = s * l with s a product of S-generators and l an auxiliary prime.

    l must make every a_i a square mod l so that no symbol at l is -1; the
    S-part is then fixed by linear algebra over F2.
    """
    a, b = Q
    gens = [-1] + [p for p in places if p != INF]
    eqs = [(i, v) for v in places for i in range(len(avals))]
    rows = []
    for i, v in eqs:
        rows.append(sum(1 << k for k, g in enumerate(gens) if hilbert_symbol(avals[i], g, v) == -1))
    wanted = {v: _wanted(targets, a, b, v) for v in places}
    aux = [1]
    p = 2
    bad = set(gens)
    while len(aux) <= AUX_PRIMES and p < AUX_SCAN:
        p = nextprime(p)
        if p in bad:
            continue
        if all(legendre(x.numerator * x.denominator, p) == 1 for x in avals):
            aux.append(p)
    for ell in aux:
        rhs = []
        for i, v in eqs:
            need = wanted[v][i] * (hilbert_symbol(avals[i], ell, v) if ell != 1 else 1)
            rhs.append(1 if need == -1 else 0)
        x = _solve_f2(rows, rhs)
        if x is None:
            continue
        mu = Fraction(ell)
        for k, g in enumerate(gens):
            if x >> k & 1:
                mu *= g
        return mu
    return None


def obstruction_certificate(avals, targets, Q, place, mask):
    a, b = Q
    subset = [i for i in range(len(avals)) if mask >> i & 1]
    prod = Fraction(1)
    for i in subset:
        prod *= avals[i]
    return Certificate(
        RECIPROCITY,
        "Q",
        [_fs(x) for x in avals],
        steps=[{"place": str(place), "product": _fs(prod), "local_square": True}],
        places={"Q": [_fs(a), _fs(b)], "targets": list(targets), "place": str(place)},
        obstruction=subset,
    )


def _fs(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def verify_obstruction(cert):
    try:
        avals = [Fraction(s) for s in cert.form]
        a, b = (Fraction(s) for s in cert.places["Q"])
        targets = [_target(t) for t in cert.places["targets"]]
        v = check_place(cert.places["place"])
        subset = [int(i) for i in cert.obstruction]
    except Exception:
        return False
    if not subset or len(targets) != len(avals) or any(i < 0 or i >= len(avals) for i in subset):
        return False
    prod = Fraction(1)
    sign = 1
    wanted = _wanted(targets, a, b, v)
    for i in set(subset):
        prod *= avals[i]
        sign *= wanted[i]
    return is_local_square(prod, v) and sign == -1
