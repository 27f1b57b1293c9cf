#!/usr/bin/env python3
"""Micro-benchmark: compiled kernels against the numpy/python fallback.

Run from the repository root after an editable install:

    python benchmarks/bench_kernels.py [--size 1000000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from zetaforge import kernels
from zetaforge.kernels import fallback

try:
    from zetaforge.kernels import _speedups
except ImportError:
    _speedups = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=1_000_000,
                        help="series length / sample-array length")
    parser.add_argument("--repeat", type=int, default=5, help="take the best of N runs")
    args = parser.parse_args()

    print(f"active backend: {kernels.BACKEND}")
    if _speedups is None:
        print("compiled extension unavailable; nothing to compare")
        return

    rng = np.random.default_rng(0)
    x, y, z, w = rng.random((4, args.size))
    out = np.empty(args.size)

    cases = [
        ("monomial_series_sum t=3 k=2 r=2 s=5", lambda m: m.monomial_series_sum(3, 2, 2, 5, args.size)),
        ("shifted_power_sum a=4 j=3", lambda m: m.shifted_power_sum(4, 3, args.size)),
        ("mc_eval2 n=2", lambda m: m.mc_eval2(2, x, y, out)),
        ("mc_eval3 n=2", lambda m: m.mc_eval3(2, x, y, z, out)),
        ("mc_eval4 n=2", lambda m: m.mc_eval4(2, x, y, z, w, out)),
    ]
    width = max(len(name) for name, _ in cases)
    print(f"{'kernel':<{width}}  {'compiled':>11}  {'fallback':>11}  {'speedup':>8}")
    for name, call in cases:
        fast = best_of(lambda: call(_speedups), args.repeat)
        slow = best_of(lambda: call(fallback), args.repeat)
        print(f"{name:<{width}}  {fast * 1e3:9.2f} ms  {slow * 1e3:9.2f} ms  {slow / fast:7.1f}x")


if __name__ == "__main__":
    main()
