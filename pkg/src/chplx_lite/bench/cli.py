"""``chplx-bench``: run one benchmark with the native kernels and append CSV rows."""

from __future__ import annotations

import argparse
import sys

from ..runtime import kernels
from .gups import GupsParams, run_gups
from .heat import HeatParams, run_heat
from .results import write_results_csv
from .stream import StreamParams, run_stream


def _power_of_two(text: str) -> int:
    """Accepts ``65536`` or ``2^16``."""
    if "^" in text:
        base, _, exp = text.partition("^")
        value = int(base) ** int(exp)
    else:
        value = int(text, 0)
    if value < 1 or value & (value - 1):
        raise argparse.ArgumentTypeError(f"{text} is not a power of two")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chplx-bench", description=__doc__)
    ap.add_argument("--bench", choices=("heat", "stream", "gups"), required=True)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--nx", type=int, default=1_000_000, help="heat grid points")
    ap.add_argument("--nt", type=int, default=100, help="heat time steps")
    ap.add_argument("--denominator", choices=("h2", "2h"), default="h2",
                    help="heat stencil denominator")
    ap.add_argument("--n", type=int, default=1_000_000, help="stream vector length")
    ap.add_argument("--tableSize", type=_power_of_two, default=1 << 20,
                    help="gups table words, e.g. 2^20")
    ap.add_argument("--updates", type=int, default=1 << 22)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--impl", choices=("compiled", "python"), default=None,
                    help="kernel implementation (default: %s)" % kernels.NAME)
    ap.add_argument("--csv", required=True, help="results file (appended)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return 2
    try:
        impl = kernels.implementation(args.impl)
        if args.bench == "heat":
            results = [run_heat(HeatParams(args.nx, args.nt, denominator=args.denominator),
                                args.threads, impl)]
        elif args.bench == "stream":
            results = run_stream(StreamParams(args.n), args.threads, impl)
        else:
            results = [run_gups(GupsParams(args.tableSize, args.updates, seed=args.seed),
                                args.threads, impl)]
        write_results_csv(results, args.csv)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for r in results:
        rate = "" if r.rate is None else f" rate={r.rate:.4g}"
        print(f"{r.benchmark}: threads={r.threads} seconds={r.seconds:.4g}{rate}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
