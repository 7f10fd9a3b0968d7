"""Hot-loop kernels with implementation selection at import time.

Prefers the compiled extension (built from ``_kernels.pyx``); falls back to
the pure-Python twin when the extension is missing or ``PMT_PURE_PYTHON`` is
set.  Callers pass plain sequences; conversion to typed buffers happens here.
"""

from __future__ import annotations

import os
from array import array
from typing import Sequence

from . import _kernels_py

if os.environ.get("PMT_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

IMPLEMENTATION: str = _impl.IMPLEMENTATION

wrap_corrected_delta = _impl.wrap_corrected_delta


def sum_wrapped_deltas(raws: Sequence[int], max_range: int) -> int:
    if not isinstance(raws, array):
        raws = array("q", raws)
    return _impl.sum_wrapped_deltas(raws, max_range)


def integrate_left_rectangle(
    timestamps: Sequence[float], watts: Sequence[float]
) -> float:
    if not isinstance(timestamps, array):
        timestamps = array("d", timestamps)
    if not isinstance(watts, array):
        watts = array("d", watts)
    return _impl.integrate_left_rectangle(timestamps, watts)


def using_compiled() -> bool:
    return IMPLEMENTATION == "compiled"
