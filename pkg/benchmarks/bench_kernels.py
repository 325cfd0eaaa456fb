"""Time the compiled and numpy row-reduction kernels on random matrices mod p.

    python benchmarks/bench_kernels.py [--sizes 50,100,200] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from multireg import _linalg_py

try:
    from multireg import _linalg_c
except ImportError:
    _linalg_c = None

P = 32003


def best_of(fn, A, repeat):
    best = float("inf")
    for _ in range(repeat):
        B = A.copy()
        t0 = time.perf_counter()
        fn(B, P)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'shape':>12} {'numpy (s)':>12} {'cython (s)':>12} {'speedup':>8}")
    for n in (int(x) for x in args.sizes.split(",")):
        # rank-deficient, like the quotient matrices the criterion produces
        A = (rng.integers(0, P, size=(n, n // 2)) @ rng.integers(0, P, size=(n // 2, n))) % P
        A = A.astype(np.int64)
        t_py = best_of(_linalg_py.rref_modp, A, args.repeat)
        if _linalg_c is None:
            print(f"{n:>5}x{n:<6} {t_py:12.4f} {'n/a':>12}")
            continue
        t_c = best_of(_linalg_c.rref_modp, A, args.repeat)
        assert _linalg_c.rank_modp(A.copy(), P) == _linalg_py.rank_modp(A.copy(), P)
        print(f"{n:>5}x{n:<6} {t_py:12.4f} {t_c:12.4f} {t_py / t_c:8.1f}")


if __name__ == "__main__":
    main()
