"""Seeded random instance generators shared by the test modules."""

from fractions import Fraction
import random

from outerforms.fields import parse_tower
from outerforms.hermitian import IMPROPER, PROPER, SkewHermForm, UnitaryHermForm
from outerforms.quadforms.rational import decide_isotropic
from outerforms.quaternion import QuatAlgebra, anticommuting_pure, is_division

QQ = parse_tower("Q")


def rand_frac(rng, h=9, den=4):
    while True:
        x = Fraction(rng.randint(-h, h), rng.randint(1, den))
        if x:
            return x


def division_algebra(rng, h=12):
    while True:
        a, b = rng.randint(-h, h), rng.randint(-h, h)
        if a and b:
            Q = QuatAlgebra(QQ.scalar(a), QQ.scalar(b), QQ)
            if is_division(Q).verdict == "division":
                return Q


def pure(rng, Q):
    while True:
        x = Q.element(0, *(rng.randint(-3, 3) for _ in range(3)))
        if not x.is_zero():
            return x


def _block_data(q):
    u = anticommuting_pure(q)
    return (q * q).scalar_part().as_fraction(), (u * u).scalar_part().as_fraction()


def _available(data, mu):
    """Block kinds for which <q> admits a similitude with multiplier mu."""
    a, s = data
    mu = mu.as_fraction()
    # <1, -a> represents c iff <1, -a, -c> is isotropic
    kinds = []
    if decide_isotropic([1, -a, -mu]):
        kinds.append(PROPER)
    if decide_isotropic([1, -a, -mu / s]):
        kinds.append(IMPROPER)
    return kinds


def similitude_instance(rng, max_rank=4):
    """(h, mu, pattern) for which a diagonal similitude exists."""
    while True:
        Q = division_algebra(rng)
        n = rng.randint(1, max_rank)
        h = SkewHermForm(Q, [pure(rng, Q) for _ in range(n)])
        data = [_block_data(q) for q in h.entries]
        for _ in range(20):
            mu = QQ.scalar(rng.choice([1, -1]) * rng.randint(1, 30))
            opts = [_available(x, mu) for x in data]
            if all(opts):
                return h, mu, [rng.choice(o) for o in opts]


def unitary_instance(rng, Q0=None, max_rank=3):
    """(datum, h) for a random theta-symmetric diagonal form over (Q0 (x) K)."""
    from outerforms.descent import UnitaryDescentDatum

    Q0 = Q0 or QuatAlgebra(QQ.scalar(-1), QQ.scalar(-1), QQ)
    datum = UnitaryDescentDatum(Q0, QQ.scalar(rng.choice([2, 3, 5])))
    alg = datum.alg
    s = alg.sqrt_d()
    ents = []
    n = rng.randint(1, max_rank)
    while len(ents) < n:
        e = alg.element(rand_frac(rng)) + s * alg.element(0, *(rand_frac(rng) for _ in range(3)))
        if not e.nrd().is_zero():
            ents.append(e)
    return datum, UnitaryHermForm(alg, entries=ents)
