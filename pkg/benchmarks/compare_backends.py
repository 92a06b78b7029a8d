#!/usr/bin/env python3
"""Benchmark the compiled step kernel against the pure-Python twin.

Times the sequential angle-chain generation (the hot inner loop: one
bisection root solve per iterate, ~44 transcendental evaluations each) and
verifies that the two backends produce bitwise-identical output.

Usage:
    python benchmarks/compare_backends.py [--count 50000] [--repeats 3]
"""

import argparse
import time

import numpy as np

from altproj import _pure

try:
    from altproj import _speedups
except ImportError:
    _speedups = None


def best_time(module, count: int, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        module.chain(0.0, count, 1e-13, 700.0)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=50_000, help="chain length")
    parser.add_argument("--repeats", type=int, default=3, help="best-of repeats")
    args = parser.parse_args()

    t_pure = best_time(_pure, args.count, args.repeats)
    rate_pure = args.count / t_pure
    print(f"{'backend':<10} {'time [s]':>10} {'steps/s':>12}")
    print(f"{'python':<10} {t_pure:>10.4f} {rate_pure:>12.0f}")

    if _speedups is None:
        print("compiled backend not built; install with the Cython extension to compare")
        return 0

    t_fast = best_time(_speedups, args.count, args.repeats)
    rate_fast = args.count / t_fast
    print(f"{'compiled':<10} {t_fast:>10.4f} {rate_fast:>12.0f}")
    print(f"speedup: {t_pure / t_fast:.1f}x")

    a_py, _ = _pure.chain(0.0, min(args.count, 5000), 1e-13, 700.0)
    a_cy, _ = _speedups.chain(0.0, min(args.count, 5000), 1e-13, 700.0)
    identical = np.array_equal(a_py, a_cy)
    print(f"bitwise identical over {a_py.size} steps: {identical}")
    return 0 if identical else 1


if __name__ == "__main__":
    raise SystemExit(main())
