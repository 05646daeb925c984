from fractions import Fraction

from hypothesis import given, strategies as st
import pytest

from outerforms.errors import ParseError, PreconditionError
from outerforms.fields import is_square, parse_scalar, parse_tower, sqrt, squarefree_int, tame_residue
from outerforms.grammar import split_top_level

T = parse_tower("Q(i)[a1,a2][r,s,t]")
P = parse_tower("Q[x,y]")

small = st.integers(-6, 6)


@st.composite
def poly(draw, tower=P):
    """Small polynomial in x, y with integer coefficients."""
    x, y = tower.var("x"), tower.var("y")
    acc = tower.zero()
    for e in range(draw(st.integers(0, 3))):
        acc = acc + draw(small) * x ** draw(st.integers(0, 2)) * y ** draw(st.integers(0, 2))
    return acc


def test_tower_syntax():
    assert T.vars == ("a1", "a2", "r", "s", "t")
    assert T.gaussian
    assert not parse_tower("Q[a]").gaussian
    assert str(parse_tower("Q[a1]").join(parse_tower("Q[a1,a2]"))) == "Q[a1,a2]"


@pytest.mark.parametrize("bad", ["Q[a1,a1]", "R[x]", "Q[", "Q[x]["])
def test_bad_towers(bad):
    with pytest.raises(ParseError):
        parse_tower(bad)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse_scalar("a1 + * 2", T)
    assert exc.value.position == 5


def test_unknown_identifier():
    with pytest.raises(ParseError, match="unknown identifier"):
        parse_scalar("z", T)
    with pytest.raises(ParseError):
        parse_scalar("I", P)


def test_signed_exponents():
    a1 = T.var("a1")
    assert parse_scalar("a1^(-1)", T) == 1 / a1
    assert parse_scalar("a1^-2", T) == 1 / (a1 * a1)
    assert parse_scalar("a1^(+3)", T) == a1 ** 3
    with pytest.raises(ParseError):
        parse_scalar("a1^a2", T)


def test_gaussian_unit():
    i = parse_scalar("I", T)
    assert i * i == -1
    assert parse_scalar("i", T) == i


def test_split_top_level():
    assert split_top_level("a,(b,c),d") == ["a", "(b,c)", "d"]


@given(poly(), poly(), poly())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a - a == 0
    if not b.is_zero():
        assert (a / b) * b == a


@given(poly())
def test_string_round_trip(a):
    assert parse_scalar(str(a), P) == a


@given(poly())
def test_sqrt_of_square(a):
    if a.is_zero():
        return
    r = sqrt(a * a)
    assert r is not None and r * r == a * a
    assert is_square(a * a)


@given(st.integers(1, 10**6))
def test_squarefree_int(n):
    m = squarefree_int(n)
    q = Fraction(n, m)
    assert q.denominator == 1
    k = round(q.numerator ** 0.5)
    assert k * k == q.numerator


def test_tame_residue():
    v, res = tame_residue(parse_scalar("r^2*(1+r)*a1", T), "r")
    assert v == 2 and str(res) == "a1"
    v, res = tame_residue(parse_scalar("(1-a1)^3*a2", parse_tower("Q[a1,a2]")), "1-a1")
    assert v == 3
    with pytest.raises(PreconditionError):
        tame_residue(T.zero(), "r")
