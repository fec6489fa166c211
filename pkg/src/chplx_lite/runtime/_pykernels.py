"""Pure numpy/Python versions of the compiled kernels, same signatures.

Every kernel performs the same floating-point operations in the same order as
its compiled twin, so results are bitwise identical.
"""

from __future__ import annotations

import threading

import numpy as np

NAME = "python"

_M64 = (1 << 64) - 1
_xor_lock = threading.Lock()


def heat_block(u, unew, lo, hi, dt, alpha, denom):
    unew[lo:hi] = u[lo:hi] + dt * alpha * (u[lo - 1:hi - 1] - 2.0 * u[lo:hi] + u[lo + 1:hi + 1]) / denom


def stream_copy(c, a, lo, hi):
    c[lo:hi] = a[lo:hi]


def stream_scale(b, c, q, lo, hi):
    b[lo:hi] = q * c[lo:hi]


def stream_add(c, a, b, lo, hi):
    c[lo:hi] = a[lo:hi] + b[lo:hi]


def stream_triad(a, b, c, q, lo, hi):
    a[lo:hi] = b[lo:hi] + q * c[lo:hi]


def gups_block(table, state, count, literal):
    mask = len(table) - 1
    x = state
    idx = np.empty(count, dtype=np.int64)
    for k in range(count):
        x ^= (x << 13) & _M64
        x ^= x >> 7
        x ^= (x << 17) & _M64
        idx[k] = x & mask
    with _xor_lock:
        np.bitwise_xor.at(table, idx, np.int64(literal))
    return x


def fma_sweep(x, lo, hi, a, b, reps):
    seg = x[lo:hi]
    for _ in range(reps):
        seg *= a
        seg += b


def partition(buf, lo, hi):
    if hi - lo <= 0:
        return lo, hi
    seg = buf[lo:hi]
    p = sorted((int(seg[0]), int(seg[(hi - lo) // 2]), int(seg[-1])))[1]
    left, mid, right = seg[seg < p], seg[seg == p], seg[seg > p]
    seg[:] = np.concatenate((left, mid, right))
    return lo + len(left), lo + len(left) + len(mid)


def sort_block(buf, lo, hi):
    buf[lo:hi] = sorted(buf[lo:hi].tolist())
