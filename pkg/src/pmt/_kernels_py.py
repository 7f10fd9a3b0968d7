"""Pure-Python math kernels.

Behavioural twin of the compiled ``pmt._kernels`` extension; kept in exact
lockstep so either can back :mod:`pmt.kernels`.
"""

from __future__ import annotations

from typing import Sequence

IMPLEMENTATION = "python"


def wrap_corrected_delta(prev_raw: int, cur_raw: int, max_range: int) -> int:
    """Counter advance between two raw readings of a wrapping counter.

    ``max_range`` is the counter modulus; at most one wrap per interval is
    assumed.
    """
    if cur_raw >= prev_raw:
        return cur_raw - prev_raw
    return cur_raw + (max_range - prev_raw)


def sum_wrapped_deltas(raws: Sequence[int], max_range: int) -> int:
    """Total advance of a wrapping counter over a whole raw trajectory."""
    total = 0
    prev = -1
    for cur in raws:
        if prev >= 0:
            if cur >= prev:
                total += cur - prev
            else:
                total += cur + (max_range - prev)
        prev = cur
    return total


def integrate_left_rectangle(timestamps: Sequence[float], watts: Sequence[float]) -> float:
    """Left-rectangle integral of a power series over its measured intervals."""
    n = len(timestamps)
    if len(watts) != n:
        raise ValueError(f"length mismatch: {n} timestamps vs {len(watts)} watts")
    total = 0.0
    for i in range(n - 1):
        total += watts[i] * (timestamps[i + 1] - timestamps[i])
    return total
