from fractions import Fraction

from hypothesis import given, strategies as st
import pytest
from sympy import factorint

from outerforms.errors import OuterFormsError
from outerforms.quadforms.local import INF, hilbert_symbol, is_local_square

nz = st.integers(-500, 500).filter(bool)
rat = st.builds(Fraction, nz, st.integers(1, 50))


def _places(*xs):
    ps = {2}
    for x in xs:
        for n in (x.numerator, x.denominator):
            ps.update(p for p in factorint(abs(n)) if p > 1)
    return sorted(ps) + [INF]


@pytest.mark.parametrize("a,b,v,expected", [
    (-1, -1, 2, -1), (-1, -1, INF, -1), (-1, -1, 3, 1), (2, 3, 3, -1), (5, 2, 5, -1),
    (3, 3, 3, -1), (-1, 3, 3, -1), (2, 5, 2, -1), (1, 7, 7, 1),
])
def test_known_values(a, b, v, expected):
    assert hilbert_symbol(a, b, v) == expected


@pytest.mark.property
@given(rat, rat, rat)
def test_symbol_laws(a, b, c):
    prod = 1
    for v in _places(a, b, c):
        s = hilbert_symbol(a, b, v)
        assert s == hilbert_symbol(b, a, v)
        assert hilbert_symbol(a, b * c, v) == s * hilbert_symbol(a, c, v)
        assert hilbert_symbol(a, -a, v) == 1
        assert hilbert_symbol(a, b * c * c, v) == s
        prod *= s
    assert prod == 1


@pytest.mark.property
@given(rat, st.sampled_from([2, 3, 5, 7, 11, INF]))
def test_square_iff_trivial_against_everything(a, v):
    # a is a local square iff (a, b)_v = 1 for every b; test against the class representatives
    if is_local_square(a, v):
        assert all(hilbert_symbol(a, b, v) == 1 for b in (-1, 2, 3, 5, 7, 11, -2, 6))


def test_bad_place():
    with pytest.raises(OuterFormsError):
        hilbert_symbol(2, 3, 4)
