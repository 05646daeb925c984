from hypothesis import given, strategies as st
import numpy as np
import pytest

from outerforms import kernels

BACKENDS = kernels.backends()


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS


def test_fallback_is_importable():
    assert "python" in BACKENDS


@pytest.mark.property
@given(st.lists(st.integers(-25, 25).filter(bool), min_size=2, max_size=4), st.integers(1, 30))
def test_isotropic_search_backends_agree(cs, bound):
    results = {name: mod.isotropic_search(cs, bound) for name, mod in BACKENDS.items()}
    first = next(iter(results.values()))
    assert all(r == first for r in results.values())
    if first is not None:
        assert any(first) and sum(c * x * x for c, x in zip(cs, first)) == 0
        assert max(first) <= bound


def test_isotropic_search_big_coefficients():
    cs = [10**15, -(10**15)]
    for mod in BACKENDS.values():
        assert mod.isotropic_search(cs, 3) is not None


@pytest.mark.property
@given(st.integers(0, 2**31), st.integers(1, 2))
def test_residue_filter_backends_agree(seed, m):
    rng = np.random.default_rng(seed)
    p = 10007
    qr = np.zeros(p, dtype=np.uint8)
    qr[(np.arange(p, dtype=np.int64) ** 2) % p] = 1
    cand = rng.integers(0, p, size=(12, 5))
    free = rng.integers(1, p, size=(m, 5))
    target = rng.integers(0, p, size=5)
    inv = rng.integers(1, p, size=5)
    out = {name: mod.residue_filter(cand, free, target, inv, qr, p, 1000) for name, mod in BACKENDS.items()}
    first = next(iter(out.values()))
    assert all(sorted(map(tuple, r)) == sorted(map(tuple, first)) for r in out.values())


def test_env_forces_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, OUTERFORMS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from outerforms import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
