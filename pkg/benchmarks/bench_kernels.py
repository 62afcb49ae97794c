"""Benchmark the jitted transportation kernel against the vectorized fallback.

Generates random balanced transportation instances, times both backends on
identical inputs, and checks their objectives agree to 1e-9 while at it.

Usage:
    python3 benchmarks/bench_kernels.py [--sizes 8,16,32,64] [--repeats 20]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from microstyle.kernels import (
    HAS_NUMBA,
    _transport_cost_loops,
    _transport_cost_numpy,
)


def random_instance(n: int, rng: np.random.Generator):
    supply = rng.random(n) + 0.05
    supply /= supply.sum()
    demand = rng.random(n) + 0.05
    demand /= demand.sum()
    cost = rng.random((n, n)) * 4.0
    return supply, demand, cost


def time_backend(fn, instances, repeats: int) -> tuple[float, list[float]]:
    best = float("inf")
    objectives = []
    for _ in range(repeats):
        start = time.perf_counter()
        objectives = [float(fn(s, d, c)) for s, d, c in instances]
        best = min(best, time.perf_counter() - start)
    return best, objectives


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="8,16,32,64",
                        help="comma-separated square instance sizes")
    parser.add_argument("--repeats", type=int, default=20,
                        help="timing repeats per size (best-of)")
    parser.add_argument("--instances", type=int, default=10,
                        help="instances per size")
    parser.add_argument("--seed", type=int, default=1234)
    args = parser.parse_args()

    if not HAS_NUMBA:
        print("numba is not installed; only the numpy backend can run")
        return 1

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    # Compile outside the timed region.
    warm = random_instance(4, rng)
    _transport_cost_loops(*warm)

    print(f"{'n':>5} {'numba (ms)':>12} {'numpy (ms)':>12} {'speedup':>9}")
    for n in sizes:
        instances = [random_instance(n, rng) for _ in range(args.instances)]
        t_loops, obj_loops = time_backend(_transport_cost_loops, instances,
                                          args.repeats)
        t_numpy, obj_numpy = time_backend(_transport_cost_numpy, instances,
                                          args.repeats)
        worst = max(abs(a - b) for a, b in zip(obj_loops, obj_numpy))
        if worst > 1e-9:
            print(f"backend objectives diverge at n={n}: {worst:.3e}")
            return 1
        print(f"{n:>5} {t_loops * 1e3:>12.3f} {t_numpy * 1e3:>12.3f} "
              f"{t_numpy / t_loops:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
