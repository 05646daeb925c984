"""Compare the compiled and pure-Python search kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

import numpy as np

from outerforms import kernels


def _forms(rng, n):
    nz = [x for x in range(-20, 21) if x]
    return [[rng.choice(nz) for _ in range(4)] for _ in range(n)]


def bench_isotropic(mod, forms, bound):
    t = time.perf_counter()
    out = [mod.isotropic_search(f, bound) for f in forms]
    return time.perf_counter() - t, out


def bench_filter(mod, repeat):
    rng = np.random.default_rng(0)
    p = 1048601
    qr = np.zeros(p, dtype=np.uint8)
    qr[(np.arange(p, dtype=np.int64) ** 2) % p] = 1
    cand = rng.integers(0, p, size=(300, 20))
    free = rng.integers(1, p, size=(2, 20))
    target = rng.integers(0, p, size=20)
    inv = rng.integers(1, p, size=20)
    t = time.perf_counter()
    for _ in range(repeat):
        out = mod.residue_filter(cand, free, target, inv, qr, p, 10**6)
    return time.perf_counter() - t, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--forms", type=int, default=200)
    ap.add_argument("--bound", type=int, default=60)
    args = ap.parse_args()
    backends = kernels.backends()
    forms = _forms(random.Random(0), args.forms)
    print(f"selected backend: {kernels.BACKEND}")
    results = {}
    for name, mod in backends.items():
        t1, o1 = bench_isotropic(mod, forms, args.bound)
        t2, o2 = bench_filter(mod, args.repeat)
        results[name] = (o1, sorted(map(tuple, o2)))
        print(f"{name:8s} isotropic_search {t1:8.3f}s   residue_filter {t2:8.3f}s")
    outs = list(results.values())
    print("backends agree:", all(o == outs[0] for o in outs))


if __name__ == "__main__":
    main()
