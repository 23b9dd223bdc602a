"""Benchmark the exact-ordering kernel: numba JIT vs pure-Python fallback.

The Held-Karp dynamic program in storydeck.ordering is the only hot loop in
the package; everything else is vectorized numpy or I/O bound.  This script
times order_indices at several problem sizes in both modes by re-importing
the module under STORYDECK_DISABLE_NUMBA.

Usage: python3 benchmarks/bench_ordering.py
"""

import importlib
import os
import statistics
import sys
import time

import numpy as np

SIZES = [6, 8, 10, 12]
REPEATS = 5


def load_ordering(disable_jit: bool):
    os.environ.pop("STORYDECK_DISABLE_NUMBA", None)
    if disable_jit:
        os.environ["STORYDECK_DISABLE_NUMBA"] = "1"
    sys.modules.pop("storydeck.ordering", None)
    return importlib.import_module("storydeck.ordering")


def bench(mod) -> dict[int, float]:
    rng = np.random.default_rng(0)
    mod.order_indices(rng.random((4, 4)))  # warm-up (JIT compilation)
    results = {}
    for n in SIZES:
        cost = rng.random((n, n))
        samples = []
        for _ in range(REPEATS):
            start = time.perf_counter()
            mod.order_indices(cost)
            samples.append(time.perf_counter() - start)
        results[n] = statistics.median(samples)
    return results


def main() -> None:
    jit = load_ordering(disable_jit=False)
    jit_label = "numba" if jit.JIT_ACTIVE else "numba (unavailable: pure)"
    jit_times = bench(jit)

    pure = load_ordering(disable_jit=True)
    assert not pure.JIT_ACTIVE
    pure_times = bench(pure)

    print(f"{'n':>4}  {jit_label:>12}  {'pure':>12}  {'speedup':>8}")
    for n in SIZES:
        speedup = pure_times[n] / jit_times[n] if jit_times[n] else float("inf")
        print(f"{n:>4}  {jit_times[n] * 1e3:>10.3f}ms  "
              f"{pure_times[n] * 1e3:>10.3f}ms  {speedup:>7.1f}x")


if __name__ == "__main__":
    main()
