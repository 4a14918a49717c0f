"""Time the compiled enumeration kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--max-n 24]
"""

import argparse
import time

import numpy as np

from manyworlds import kernels


def _best_of(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=24)
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(sorted(backends))} (selected: {kernels.BACKEND})")

    print("\nplus_count_histogram")
    print(f"{'n':>4} " + "".join(f"{name:>12}" for name in sorted(backends)) + "  speedup")
    for n in range(16, args.max_n + 1, 2):
        times = {
            name: _best_of(lambda impl=impl: impl.plus_count_histogram(n))
            for name, impl in backends.items()
        }
        ratio = times["python"] / times["cython"] if len(times) == 2 else float("nan")
        cells = "".join(f"{times[name] * 1e3:>10.1f}ms" for name in sorted(times))
        print(f"{n:>4} {cells}  {ratio:>6.1f}x")

    print("\nweighted_plus_count_histogram")
    print(f"{'n':>4} " + "".join(f"{name:>12}" for name in sorted(backends)) + "  speedup")
    rng = np.random.default_rng(7)
    for n in range(14, min(args.max_n, 22) + 1, 2):
        probs = rng.uniform(0.05, 0.95, size=n)
        times = {
            name: _best_of(lambda impl=impl: impl.weighted_plus_count_histogram(probs))
            for name, impl in backends.items()
        }
        ratio = times["python"] / times["cython"] if len(times) == 2 else float("nan")
        cells = "".join(f"{times[name] * 1e3:>10.1f}ms" for name in sorted(times))
        print(f"{n:>4} {cells}  {ratio:>6.1f}x")


if __name__ == "__main__":
    main()
