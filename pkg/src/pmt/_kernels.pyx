# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled math kernels: counter unwrapping and trace integration.

Behavioural twin of ``pmt._kernels_py``; any change here must land there too.
"""

IMPLEMENTATION = "compiled"


def wrap_corrected_delta(long long prev_raw, long long cur_raw, long long max_range):
    """Counter advance between two raw readings of a wrapping counter.

    ``max_range`` is the counter modulus; at most one wrap per interval is
    assumed.
    """
    if cur_raw >= prev_raw:
        return cur_raw - prev_raw
    return cur_raw + (max_range - prev_raw)


def sum_wrapped_deltas(long long[:] raws, long long max_range):
    """Total advance of a wrapping counter over a whole raw trajectory."""
    cdef long long total = 0
    cdef long long prev = -1
    cdef long long cur
    cdef Py_ssize_t i
    for i in range(raws.shape[0]):
        cur = raws[i]
        if prev >= 0:
            if cur >= prev:
                total += cur - prev
            else:
                total += cur + (max_range - prev)
        prev = cur
    return total


def integrate_left_rectangle(double[:] timestamps, double[:] watts):
    """Left-rectangle integral of a power series over its measured intervals."""
    cdef Py_ssize_t n = timestamps.shape[0]
    if watts.shape[0] != n:
        raise ValueError(
            f"length mismatch: {n} timestamps vs {watts.shape[0]} watts"
        )
    cdef double total = 0.0
    cdef Py_ssize_t i
    for i in range(n - 1):
        total += watts[i] * (timestamps[i + 1] - timestamps[i])
    return total
