#!/usr/bin/env python3
"""Compare the compiled kernels with the pure-Python fallback.

Times the two hot loops (trace integration and counter unwrapping) on
synthetic inputs of configurable size and prints a speedup table.

    python benchmarks/bench_kernels.py --size 2000000 --repeat 5
"""

from __future__ import annotations

import argparse
import random
import time
from array import array

from pmt import _kernels_py

try:
    from pmt import _kernels
except ImportError:
    _kernels = None


def make_trace(size: int, seed: int = 1):
    rng = random.Random(seed)
    timestamps = array("d")
    watts = array("d")
    t = 0.0
    for _ in range(size):
        t += rng.uniform(0.004, 0.012)
        timestamps.append(t)
        watts.append(rng.uniform(10.0, 300.0))
    return timestamps, watts


def make_trajectory(size: int, modulus: int, seed: int = 2):
    rng = random.Random(seed)
    raws = array("q")
    raw = 0
    for _ in range(size):
        raw = (raw + rng.randrange(modulus // 1000)) % modulus
        raws.append(raw)
    return raws


def best_of(fn, repeat: int) -> float:
    return min(timed(fn) for _ in range(repeat))


def timed(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=2_000_000, help="elements per input")
    parser.add_argument("--repeat", type=int, default=5, help="take the best of N runs")
    args = parser.parse_args()

    timestamps, watts = make_trace(args.size)
    raws = make_trajectory(args.size, modulus=262_143_328_850)

    cases = [
        ("integrate_left_rectangle",
         lambda impl: impl.integrate_left_rectangle(timestamps, watts)),
        ("sum_wrapped_deltas",
         lambda impl: impl.sum_wrapped_deltas(raws, 262_143_328_850)),
    ]

    print(f"inputs: {args.size} elements, best of {args.repeat}")
    print(f"{'kernel':<28} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for name, call in cases:
        py = best_of(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{name:<28} {py * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}")
            continue
        native = best_of(lambda: call(_kernels), args.repeat)
        check_py, check_c = call(_kernels_py), call(_kernels)
        assert check_py == check_c or abs(check_py - check_c) < 1e-6 * max(abs(check_py), 1.0)
        print(f"{name:<28} {py * 1e3:>10.2f}ms {native * 1e3:>10.2f}ms {py / native:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
