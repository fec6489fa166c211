"""Task-parallel quicksort: partitions spawn both halves as tasks above a cutoff."""

from __future__ import annotations

import numpy as np

from . import kernels
from .arrays import Array
from .parallel import cobegin
from .ranges import Range

DEFAULT_CUTOFF = 1 << 14


def _sort(buf, lo, hi, cutoff, impl):
    if hi - lo <= cutoff:
        impl.sort_block(buf, lo, hi)
        return
    lt, gt = impl.partition(buf, lo, hi)
    cobegin(lambda: _sort(buf, lo, lt, cutoff, impl),
            lambda: _sort(buf, gt, hi, cutoff, impl))


def parallel_quicksort(a, cutoff: int = DEFAULT_CUTOFF, impl=None) -> Array:
    """Sorted copy of the integer array (or sequence) *a*, on the same domain."""
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    impl = impl or kernels.active
    if isinstance(a, Array):
        out = Array(a.domain, int)
        out.data[:] = a.data
    else:
        values = np.asarray(list(a), dtype=np.int64)
        out = Array(Range(0, len(values) - 1), int)
        out.data[:] = values
    _sort(out.data, 0, out.size, cutoff, impl)
    return out
