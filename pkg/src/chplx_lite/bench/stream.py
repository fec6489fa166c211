"""STREAM copy, scale, add and triad: native reference implementation."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..runtime import kernels, pool
from ..runtime.parallel import forall_blocks
from .results import BenchResult

# arrays touched per element, 8 bytes each
STREAM_ARRAYS = {"copy": 2, "scale": 2, "add": 3, "triad": 3}


@dataclass
class StreamParams:
    n: int = 1_000_000
    q: float = 3.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("stream needs n >= 1")


class StreamCheckError(AssertionError):
    pass


def initial_arrays(n: int):
    i = np.arange(n, dtype=np.float64)
    return i + 1.0, i.copy(), 2.0 * i


def _check(name, got, want):
    if not np.array_equal(got, want):
        bad = int(np.flatnonzero(got != want)[0])
        raise StreamCheckError(f"{name}: element {bad} is {got[bad]!r}, expected {want[bad]!r}")


def run_stream(p: StreamParams, threads: int, impl=None) -> list[BenchResult]:
    """Time each kernel over a parallel loop and check it element by element.

    Rates are GB/s with 8-byte elements.  Each ``output`` is the array the
    kernel wrote.
    """
    impl = impl or kernels.active
    a, b, c = initial_arrays(p.n)
    q, n = p.q, p.n
    kernels_ = [
        ("copy", lambda lo, hi: impl.stream_copy(c, a, lo, hi)),
        ("scale", lambda lo, hi: impl.stream_scale(b, c, q, lo, hi)),
        ("add", lambda lo, hi: impl.stream_add(c, a, b, lo, hi)),
        ("triad", lambda lo, hi: impl.stream_triad(a, b, c, q, lo, hi)),
    ]
    results = []
    with pool.pool_session(threads):
        for name, kernel in kernels_:
            a_in, b_in, c_in = a.copy(), b.copy(), c.copy()
            t0 = time.perf_counter()
            forall_blocks(n, kernel)
            seconds = max(time.perf_counter() - t0, 1e-9)
            got, want = {"copy": (c, a_in), "scale": (b, q * c_in), "add": (c, a_in + b_in),
                         "triad": (a, b_in + q * c_in)}[name]
            _check(name, got, want)
            rate = STREAM_ARRAYS[name] * 8 * n / seconds / 1e9
            results.append(BenchResult(f"stream-{name}", threads, seconds, rate, got.copy()))
    return results
