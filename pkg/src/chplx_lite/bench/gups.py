"""Random-access updates (GUPS): native reference implementation.

Indices come from one xorshift64 stream (shifts 13, 7, 17) started at the
seed; update k uses the (k+1)-th state.  The stream is cut into one block per
worker, and each block's starting state is found by jumping ahead with the
stream's transition matrix over GF(2), so the set of updates does not depend
on the thread count.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..runtime import kernels, pool
from ..runtime.parallel import forall_blocks
from .results import BenchResult

M64 = (1 << 64) - 1
DEFAULT_LITERAL = 0x5DEECE66D


@dataclass
class GupsParams:
    table_size: int = 1 << 20
    updates: int = 1 << 22
    literal: int = DEFAULT_LITERAL
    seed: int = 1

    def __post_init__(self):
        if self.table_size < 1 or self.table_size & (self.table_size - 1):
            raise ValueError("table size must be a power of two")
        if self.updates < 0:
            raise ValueError("update count must be non-negative")
        if self.seed & M64 == 0:
            raise ValueError("xorshift seed must be nonzero")

    @property
    def bytes(self) -> int:
        return 8 * self.updates


def xorshift64(x: int) -> int:
    x ^= (x << 13) & M64
    x ^= x >> 7
    x ^= (x << 17) & M64
    return x


# A 64x64 bit matrix is stored as 64 column images: cols[j] = M(e_j).

def _apply(cols, v: int) -> int:
    out, j = 0, 0
    while v:
        if v & 1:
            out ^= cols[j]
        v >>= 1
        j += 1
    return out


def _compose(a, b):
    return tuple(_apply(a, col) for col in b)


@lru_cache(maxsize=None)
def _power(k: int):
    """Transition matrix raised to 2**k."""
    if k == 0:
        return tuple(xorshift64(1 << j) for j in range(64))
    half = _power(k - 1)
    return _compose(half, half)


def jump(state: int, steps: int) -> int:
    """State after *steps* applications of :func:`xorshift64`."""
    k = 0
    while steps:
        if steps & 1:
            state = _apply(_power(k), state)
        steps >>= 1
        k += 1
    return state


def gups_reference(p: GupsParams) -> np.ndarray:
    """Sequential oracle: the final table."""
    table = np.arange(p.table_size, dtype=np.int64)
    mask, x, lit = p.table_size - 1, p.seed & M64, np.int64(_signed(p.literal))
    idx = np.empty(p.updates, dtype=np.int64)
    for k in range(p.updates):
        x = xorshift64(x)
        idx[k] = x & mask
    np.bitwise_xor.at(table, idx, lit)
    return table


def _signed(v: int) -> int:
    v &= M64
    return v - (1 << 64) if v >> 63 else v


def compute_gups_rate(threads: int, nbytes: float, seconds: float) -> float:
    """threads * bytes / seconds / 1e9."""
    if not seconds > 0:
        raise ValueError("seconds must be positive")
    return threads * nbytes / seconds / 1e9


def run_gups(p: GupsParams, threads: int, impl=None) -> BenchResult:
    """Apply all updates across the worker pool; ``output`` is the final table."""
    impl = impl or kernels.active
    table = np.arange(p.table_size, dtype=np.int64)
    lit, seed = _signed(p.literal), p.seed & M64
    with pool.pool_session(threads):
        t0 = time.perf_counter()
        forall_blocks(p.updates,
                      lambda lo, hi: impl.gups_block(table, jump(seed, lo), hi - lo, lit))
        seconds = max(time.perf_counter() - t0, 1e-9)
    return BenchResult("gups", threads, seconds,
                       compute_gups_rate(threads, p.bytes, seconds), table)
