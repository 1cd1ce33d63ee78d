#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Runs each hot kernel on representative workloads with both backends and
prints a timing table plus the worst numerical gap between them.  The
compiled backend must be importable (build the package first); the fallback
is always available.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from cxosc._kernels import _ref

try:
    from cxosc._kernels import _hot
except ImportError:
    _hot = None


def time_call(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_hermite(repeat):
    x = np.linspace(-20.0, 20.0, 4001)
    cases = [("hermite_table n=60, 4001 pts", (x, 60)),
             ("hermite_table n=200, 4001 pts", (x, 200))]
    return [(label, "hermite_table", args) for label, args in cases]


def bench_wigner(repeat):
    rng = np.random.default_rng(7)
    small = rng.normal(size=9) + 1j * rng.normal(size=9)
    small /= np.linalg.norm(small)
    big = rng.normal(size=34) + 1j * rng.normal(size=34)
    big /= np.linalg.norm(big)
    xs = np.linspace(-12, 12, 201)
    ps = np.linspace(-12, 12, 201)
    return [("fock_wigner 9 states, 201x201", "fock_wigner", (small, xs, ps)),
            ("fock_wigner 34 states, 201x201", "fock_wigner", (big, xs, ps))]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    cases = bench_hermite(args.repeat) + bench_wigner(args.repeat)
    print(f"{'case':<34} {'python':>10} {'compiled':>10} {'speedup':>8}  max gap")
    for label, name, call_args in cases:
        ref_time, ref_val = time_call(getattr(_ref, name), *call_args,
                                      repeat=args.repeat)
        if _hot is None:
            print(f"{label:<34} {ref_time * 1e3:>8.1f}ms {'n/a':>10}")
            continue
        hot_time, hot_val = time_call(getattr(_hot, name), *call_args,
                                      repeat=args.repeat)
        gap = np.max(np.abs(np.asarray(ref_val) - np.asarray(hot_val)))
        print(f"{label:<34} {ref_time * 1e3:>8.1f}ms {hot_time * 1e3:>8.1f}ms "
              f"{ref_time / hot_time:>7.2f}x  {gap:.2e}")
    if _hot is None:
        print("\ncompiled backend unavailable; showing fallback timings only")


if __name__ == "__main__":
    main()
