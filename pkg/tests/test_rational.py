from hypothesis import given, strategies as st
import pytest

from outerforms import kernels
from outerforms.fields import parse_tower
from outerforms.quadforms.certificates import Certificate, verify
from outerforms.quadforms.forms import QuadForm
from outerforms.quadforms.rational import anisotropic_place, is_isotropic_Q, rational_witness

QQ = parse_tower("Q")
coef = st.integers(-30, 30).filter(bool)


def form(cs):
    return QuadForm([QQ.scalar(c) for c in cs], QQ)


@pytest.mark.parametrize("cs,iso", [([1, 1], False), ([1, -1], True), ([1, 1, 1], False), ([1, 1, -2], True),
                                    ([1, 1, 1, 1], False), ([1, 1, 1, -7], False), ([1, 1, 1, 1, -1], True)])
def test_known(cs, iso):
    ok, cert = is_isotropic_Q(form(cs))
    assert ok == iso and verify(cert)


@pytest.mark.property
@given(st.lists(coef, min_size=1, max_size=4))
def test_hasse_minkowski_vs_search(cs):
    ok, cert = is_isotropic_Q(form(cs))
    assert verify(cert)
    assert ok == (kernels.isotropic_search(cs, 120) is not None)


@pytest.mark.property
@given(st.lists(coef, min_size=5, max_size=6))
def test_five_dimensional_indefinite_isotropic(cs):
    ok, _ = is_isotropic_Q(form(cs))
    indefinite = min(cs) < 0 < max(cs)
    assert ok == indefinite


@pytest.mark.property
@given(st.lists(coef, min_size=2, max_size=5))
def test_witness_is_exact(cs):
    if anisotropic_place(cs) is not None:
        return
    vec = rational_witness(cs)
    assert any(vec) and sum(c * x * x for c, x in zip(cs, vec)) == 0


def test_certificate_json_round_trip():
    _, cert = is_isotropic_Q(form([1, 1, 1]))
    again = Certificate.from_dict(cert.to_dict())
    assert again.to_json() == cert.to_json() and verify(again)


def test_tampered_certificate_rejected():
    _, cert = is_isotropic_Q(form([1, 1, -2]))
    d = cert.to_dict()
    d["witness"] = ["1", "1", "2"]
    assert not verify(Certificate.from_dict(d))
