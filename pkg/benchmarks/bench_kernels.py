"""Compare the compiled and pure-Python kernels.

Usage: python benchmarks/bench_kernels.py [--repeat R]

Prints one line per kernel and problem size with the best-of-R time of each
backend and the speedup.  With the compiled extension missing, only the
Python column is filled.
"""

import argparse
import timeit

import numpy as np

from ppnash import _pykernels as py
from ppnash.network import random_connected_graph

try:
    from ppnash import _ckernels as cy
except ImportError:
    cy = None


def cases(rng):
    for N, n in ((2, 2), (10, 10), (50, 50)):
        W = random_connected_graph(N, 0.3, seed=0).W
        X = rng.normal(size=(N, n))
        yield "mix_estimates", f"N={N} n={n}", (W, X)
    for M, d in ((1_000, 4), (100_000, 4), (100_000, 20)):
        yield "pair_products", f"M={M} d={d}", (rng.normal(size=(M, d)), rng.normal(size=(M, d)))
    for M, d in ((1, 1), (1, 10), (100_000, 4)):
        lo = rng.normal(size=(M, d))
        yield "interval_distance", f"M={M} d={d}", (lo, lo + rng.random((M, d)))


def best(fun, args, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(lambda: fun(*args), number=1), 1e-7)))
    return min(timeit.repeat(lambda: fun(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<18} {'size':<14} {'python [us]':>12} {'cython [us]':>12} {'speedup':>8}")
    for name, size, a in cases(rng):
        t_py = best(getattr(py, name), a, args.repeat)
        if cy is None:
            print(f"{name:<18} {size:<14} {t_py * 1e6:12.2f} {'-':>12} {'-':>8}")
            continue
        t_cy = best(getattr(cy, name), a, args.repeat)
        print(f"{name:<18} {size:<14} {t_py * 1e6:12.2f} {t_cy * 1e6:12.2f} {t_py / t_cy:8.2f}")


if __name__ == "__main__":
    main()
