from fractions import Fraction

from hypothesis import given, strategies as st
import pytest

from outerforms.errors import AlgebraMismatch, PreconditionError
from outerforms.fields import parse_scalar, parse_tower
from outerforms.quadforms.certificates import verify
from outerforms.quadforms.local import INF, hilbert_symbol
from outerforms.quaternion import (
    QuatAlgebra,
    anticommuting_pure,
    is_division,
    matrix_image,
    pure_with_square,
    splits_over,
    two_pure_factors,
)

QQ = parse_tower("Q")
nz = st.integers(-12, 12).filter(bool)
coef = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3))


def alg(a, b, tower=QQ):
    return QuatAlgebra(tower.scalar(a), tower.scalar(b), tower)


@st.composite
def elements(draw, Q):
    return Q.element(*(draw(coef) for _ in range(4)))


@st.composite
def alg_and_elements(draw, k=2):
    Q = alg(draw(nz), draw(nz))
    return (Q, *(draw(elements(Q)) for _ in range(k)))


def test_basis_relations():
    Q = alg(-1, 3)
    i, j, k = Q.i(), Q.j(), Q.k()
    assert i * i == -1 and j * j == 3 and i * j == k and j * i == -k
    assert k * k == 3  # -ab
    x = Q.parse("1+2*i-j+k/2")
    assert x.nrd() == Fraction(5, 4) and x.trd() == 2
    assert Q.parse(str(x)) == x


def test_cross_algebra_is_an_error():
    with pytest.raises(AlgebraMismatch):
        alg(-1, 3).i() * alg(-1, -1).i()


def test_zero_parameter_rejected():
    with pytest.raises(PreconditionError):
        alg(0, 1)


@pytest.mark.property
@given(alg_and_elements())
def test_norm_multiplicative(data):
    Q, x, y = data
    assert (x * y).nrd() == x.nrd() * y.nrd()
    assert x * x.conj() == Q.element(x.nrd())
    assert (x * y).conj() == y.conj() * x.conj()
    assert x.trd() == (x + x.conj()).scalar_part()


@pytest.mark.property
@given(alg_and_elements(1))
def test_inverse(data):
    Q, x = data
    if x.nrd().is_zero():
        return
    assert x * x.inverse() == Q.one()


@pytest.mark.property
@given(alg_and_elements(2))
def test_matrix_image_is_a_splitting(data):
    Q, x, y = data
    mx, my, mxy = matrix_image(x), matrix_image(y), matrix_image(x * y)
    assert all(mx[r][0] * my[0][c] + mx[r][1] * my[1][c] == mxy[r][c] for r in range(2) for c in range(2))
    m = mx
    m = matrix_image(x)
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    assert det == x.nrd()


@pytest.mark.property
@given(alg_and_elements(1))
def test_anticommuting_and_two_factors(data):
    Q, x = data
    p = x.pure_part()
    if not p.is_zero() and not (p * p).is_zero():
        u = anticommuting_pure(p)
        assert u * p == -(p * u) and u.is_pure()
    f, g = two_pure_factors(x)
    if not x.is_zero():
        assert f * g == x and f.is_pure()


@pytest.mark.property
@given(nz, nz)
def test_division_matches_hilbert_symbols(a, b):
    from sympy import primefactors

    places = sorted(set(primefactors(abs(a * b))) | {2}) + [INF]
    ramified = any(hilbert_symbol(a, b, v) == -1 for v in places)
    d = is_division(alg(a, b))
    assert d.verdict == ("division" if ramified else "split")
    if d.certificate is not None:
        assert verify(d.certificate)
    if d.verdict == "split":
        assert d.value.nrd() == 0 and not d.value.is_zero()


@pytest.mark.property
@given(nz, nz, st.integers(0, 2), st.integers(-4, 4).filter(bool))
def test_pure_with_square_over_Q(a, b, which, scale):
    Q = alg(a, b)
    basis = (Q.i(), Q.j(), Q.k())[which]
    c = ((basis * basis).scalar_part()) * scale * scale * 7 * 7
    d = pure_with_square(Q, c)
    assert d.verdict == "yes" and d.value.is_pure() and d.value * d.value == Q.element(c)


def test_function_field_decisions():
    T = parse_tower("Q[a1,a2]")
    Q = QuatAlgebra(T.var("a1"), T.var("a2"), T)
    assert is_division(Q).verdict == "division"
    assert splits_over(Q, T.var("a1")).verdict == "yes"
    d = splits_over(Q, parse_scalar("a1*a2+1", T))
    assert d.verdict in ("no", "unknown")


def test_unitary_extension_involutions():
    K = alg(-1, 3).over(QQ.scalar(5))
    y = K.parse("1+sqrtd*i+j")
    assert y.iota() == K.parse("1-sqrtd*i+j")
    assert y.theta() == K.parse("1+sqrtd*i-j")
    assert y.theta().theta() == y and y.iota().iota() == y
    z = K.parse("2 - sqrtd*k")
    assert (y * z).theta() == z.theta() * y.theta()
    assert (y * z).iota() == y.iota() * z.iota()
