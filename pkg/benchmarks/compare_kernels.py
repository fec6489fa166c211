"""Time the compiled kernels against the numpy/Python fallback.

Each kernel runs on one worker so the numbers compare implementations, not
scheduling.  Outputs from both implementations are checked for equality.
"""

import argparse
import statistics
import sys
import time

import numpy as np

from chplx_lite.runtime import kernels


def _time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cases(n, updates):
    rng = np.random.default_rng(1)
    u = rng.random(n)
    x = rng.random(n)
    keys = rng.integers(0, 1 << 40, n, dtype=np.int64)

    def heat(impl):
        out = u.copy()
        impl.heat_block(u, out, 1, n - 1, 0.5, 0.5, 1.0)
        return out

    def triad(impl):
        a = np.empty(n)
        impl.stream_triad(a, u, x, 3.0, 0, n)
        return a

    def gups(impl):
        table = np.arange(1 << 16, dtype=np.int64)
        impl.gups_block(table, 1, updates, 0x5DEECE66D)
        return table

    def fma(impl):
        y = x.copy()
        impl.fma_sweep(y, 0, n, 1.0000001, 1e-9, 5)
        return y

    def sort(impl):
        buf = keys.copy()
        impl.sort_block(buf, 0, n)
        return buf

    return {"heat_block": heat, "stream_triad": triad, "gups_block": gups,
            "fma_sweep": fma, "sort_block": sort}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1_000_000, help="elements per array kernel")
    ap.add_argument("--updates", type=int, default=200_000, help="gups updates")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if not kernels.COMPILED_AVAILABLE:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    py, c = kernels.implementation("python"), kernels.implementation("compiled")
    print(f"{'kernel':<14}{'python s':>12}{'compiled s':>12}{'speedup':>9}  same")
    for name, fn in cases(args.n, args.updates).items():
        same = np.array_equal(fn(py), fn(c))
        tp = _time(lambda: fn(py), args.repeat)
        tc = _time(lambda: fn(c), args.repeat)
        print(f"{name:<14}{tp:>12.5f}{tc:>12.5f}{tp / tc:>9.1f}  {'yes' if same else 'NO'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
