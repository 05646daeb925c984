from fractions import Fraction
import json
import random

from hypothesis import assume, given, settings, strategies as st
import pytest

from outerforms.errors import InternalConsistencyError, PreconditionError
from outerforms.fields import parse_tower
from outerforms.genericsum import (
    FAILS,
    HOLDS,
    UNKNOWN,
    FormalVector,
    OutReport,
    OutVerdict,
    ValueVector,
    block_nu,
    construct_even_example,
    decide_out_generic,
    decide_realizable_discriminant,
    form_value,
    graded_restriction,
    lex_compare,
    norm_nu,
    valuation_vector,
)
from outerforms.hermitian import IMPROPER, SkewHermForm, build_diagonal_similitude, verify_similitude
from outerforms.quaternion import QuatAlgebra

import _gen

QQ = parse_tower("Q")
W = parse_tower("Q[t1,t2,t3]")
WEIGHTS = ["t1", "t2", "t3"]
seeds = st.integers(0, 2**32 - 1)
vec3 = st.lists(st.integers(-6, 6), min_size=3, max_size=3)


# ------------------------------------------------------------ value vectors


def test_value_vector_basics():
    v = ValueVector.from_halves([Fraction(1, 2), 0, -1])
    assert v.c == (1, 0, -2) and v.halves() == (Fraction(1, 2), 0, -1)
    with pytest.raises(PreconditionError):
        ValueVector.from_halves([Fraction(1, 3)])
    # the last component dominates
    assert ValueVector([5, 0, 0]) < ValueVector([0, 0, 1])
    with pytest.raises(PreconditionError):
        lex_compare(ValueVector([1]), ValueVector([1, 2]))


@pytest.mark.property
@given(vec3, vec3, vec3)
def test_value_order_is_total_and_translation_invariant(u, v, w):
    u, v, w = ValueVector(u), ValueVector(v), ValueVector(w)
    assert (u < v) + (u == v) + (u > v) == 1
    assert lex_compare(u, v) == -lex_compare(v, u)
    if u < v:
        assert u + w < v + w
    if u <= v and v <= w:
        assert u <= w


@pytest.mark.property
@given(st.integers(0, 2), st.integers(0, 2), vec3, vec3)
def test_block_values_disjoint(i, j, a, b):
    assume(i != j)
    vi = ValueVector.unit(3, i, 1) + ValueVector([2 * x for x in a])
    vj = ValueVector.unit(3, j, 1) + ValueVector([2 * x for x in b])
    assert vi != vj


def test_valuation_vector():
    x = W.var("t1") ** 2 * W.var("t3") ** -1 * (1 + W.var("t2"))
    assert valuation_vector(x, WEIGHTS) == [2, 0, -1]


# ------------------------------------------------------------ formal vectors


def _weighted_form(Q=None):
    Q = Q or QuatAlgebra(W.scalar(-1), W.scalar(-3), W)
    return SkewHermForm(Q, [Q.i(), Q.j(), Q.k()], weights=WEIGHTS)


@st.composite
def formal_vectors(draw, h):
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        i = draw(st.integers(0, 2))
        alpha = tuple(draw(st.integers(0, 2)) for _ in range(3))
        c = h.alg.element(*(draw(st.integers(-3, 3)) for _ in range(4)))
        if not c.is_zero():
            terms[(i, alpha)] = c
    assume(terms)
    return FormalVector(h, terms)


H_W = _weighted_form()


@pytest.mark.property
@settings(max_examples=40)
@given(formal_vectors(H_W))
def test_norm_value_is_the_minimum_over_blocks(x):
    assert norm_nu(x) == block_nu(x)


@pytest.mark.property
@settings(max_examples=25)
@given(formal_vectors(H_W), formal_vectors(H_W))
def test_norm_value_of_sum(x, y):
    s = x + y
    if s.is_zero():
        return
    assert norm_nu(s) >= min(norm_nu(x), norm_nu(y)) or s.terms.keys() & x.terms.keys()


def test_formal_vector_validation():
    with pytest.raises(PreconditionError):
        FormalVector(H_W, {(3, (0, 0, 0)): H_W.alg.one()})
    with pytest.raises(PreconditionError):
        FormalVector(SkewHermForm(H_W.alg, [H_W.alg.i()]))
    e = FormalVector.basis(H_W, 1)
    assert form_value(e) == H_W.alg.j() * W.var("t2")


# ------------------------------------------------------- graded restriction


def _lift(h, mu, pattern):
    """Re-embed a rational instance into the weighted tower W."""
    Q0 = h.alg
    Q = QuatAlgebra(W.scalar(Q0.a.as_fraction()), W.scalar(Q0.b.as_fraction()), W)
    entries = [Q.element(*(W.scalar(c.as_fraction()) for c in q.c)) for q in h.entries]
    return SkewHermForm(Q, entries, weights=WEIGHTS[: len(entries)]), W.scalar(mu.as_fraction())


@pytest.mark.property
@settings(max_examples=20)
@given(seeds)
def test_graded_restriction_round_trip(seed):
    rng = random.Random(seed)
    h0, mu0, pattern = _gen.similitude_instance(rng, max_rank=3)
    h, mu = _lift(h0, mu0, pattern)
    sim = build_diagonal_similitude(h, mu, pattern)
    assert verify_similitude(h.gram(), sim.matrix, mu)[0]
    gr = graded_restriction(sim, h)
    assert gr.kinds == list(pattern)
    assert gr.parity == sum(k == IMPROPER for k in pattern) % 2
    assert [str(b) for b in gr.blocks] == [str(sim.matrix[i][i]) for i in range(h.rank)]


def test_graded_restriction_rejects_off_diagonal_leading_terms():
    h = _weighted_form()
    Q = h.alg
    one, z = Q.one(), Q.zero()
    # e_0 g_01 has value eps_0 / 2 < eps_1 / 2: a leading term off the diagonal
    g = [[one, one, z], [z, one, z], [z, z, one]]
    from outerforms.hermitian import SimilitudeMatrix

    with pytest.raises(PreconditionError):
        graded_restriction(SimilitudeMatrix(g, W.one()), h)


# ---------------------------------------------------------- out decisions


def _instance(seed, n=None):
    rng = random.Random(seed)
    Q = _gen.division_algebra(rng)
    n = n or rng.randint(3, 5)
    avals = []
    for _ in range(rng.randint(2, n)):
        q = _gen.pure(rng, Q)
        avals.append((q * q).scalar_part())
    return Q, avals, n, rng


def _decide(Q, avals, n):
    try:
        return decide_out_generic(avals, Q, n)
    except PreconditionError:
        assume(False)


@pytest.mark.property
@settings(max_examples=30)
@given(seeds)
def test_out_verdicts_are_monotone(seed):
    Q, avals, n, _ = _instance(seed)
    r = _decide(Q, avals, n)
    r.check_monotone()
    o1, o2, o3 = r.verdicts()
    if o3 == HOLDS:
        assert o2 == HOLDS
    if o2 == HOLDS:
        assert o1 == HOLDS
    if n % 2 == 0:
        assert o3 == FAILS


@pytest.mark.property
@settings(max_examples=15)
@given(seeds)
def test_out_verdicts_permutation_invariant(seed):
    Q, avals, n, rng = _instance(seed)
    full = avals + [avals[-1]] * (n - len(avals))
    r1 = _decide(Q, full, n)
    shuffled = list(full)
    rng.shuffle(shuffled)
    r2 = _decide(Q, shuffled, n)
    assert r1.verdicts() == r2.verdicts()


@pytest.mark.property
@settings(max_examples=15)
@given(seeds)
def test_out_witnesses_verify(seed):
    Q, avals, n, _ = _instance(seed)
    r = _decide(Q, avals, n)
    if r.out2.verdict == HOLDS:
        w = r.out2.witness["similitude"]
        assert w["type"] == IMPROPER
    if r.out3.verdict == HOLDS:
        assert r.out3.witness["similitude"]["type"] == IMPROPER


@pytest.mark.property
@settings(max_examples=15)
@given(seeds)
def test_report_json_round_trip(seed):
    Q, avals, n, _ = _instance(seed)
    r = _decide(Q, avals, n)
    text = r.to_json()
    assert json.loads(text) == json.loads(json.dumps(r.to_dict(), sort_keys=True))
    assert r.to_json() == text


def test_monotonicity_violation_detected():
    v = OutVerdict(HOLDS, "verified")
    f = OutVerdict(FAILS, "verified")
    with pytest.raises(InternalConsistencyError):
        OutReport(f, v, OutVerdict(UNKNOWN, "verified"), {}).check_monotone()


def test_hamilton_all_minus():
    Q = QuatAlgebra(QQ.scalar(-1), QQ.scalar(-1), QQ)
    r = decide_out_generic([QQ.scalar(-1)], Q, 3)
    assert r.verdicts() == (HOLDS, HOLDS, HOLDS)
    assert r.out3.witness["mu"] == "-1"


def test_preconditions():
    Q = QuatAlgebra(QQ.scalar(-1), QQ.scalar(-1), QQ)
    with pytest.raises(PreconditionError):
        decide_out_generic([QQ.scalar(-1)], Q, 2)
    with pytest.raises(PreconditionError):
        decide_out_generic([QQ.scalar(-1)], QuatAlgebra(QQ.scalar(1), QQ.scalar(-1), QQ), 3)


def test_realizable_discriminant():
    Q = QuatAlgebra(QQ.scalar(-1), QQ.scalar(-1), QQ)
    crit, _ = decide_realizable_discriminant(Q, 2)
    assert crit is False
    Q = QuatAlgebra(QQ.scalar(-1), QQ.scalar(3), QQ)
    assert decide_realizable_discriminant(Q, 2)[0] is True


def test_even_construction():
    Q = QuatAlgebra(QQ.scalar(-1), QQ.scalar(3), QQ)
    c = construct_even_example(Q, QQ.scalar(-1), 2)
    assert c.similitude.kind == IMPROPER
    assert verify_similitude(c.form, c.similitude.matrix, c.similitude.mu) == (True, IMPROPER)


def test_graded_restriction_accepts_dominated_off_diagonal_terms():
    h = _weighted_form()
    Q = h.alg
    one, z = Q.one(), Q.zero()
    from outerforms.hermitian import SimilitudeMatrix

    g = [[one, z, z], [one, one, z], [z, z, one]]
    gr = graded_restriction(SimilitudeMatrix(g, W.one()), h)
    assert gr.parity == 0 and len(gr.blocks) == 3
