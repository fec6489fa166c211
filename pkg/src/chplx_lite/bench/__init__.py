"""Benchmark kernels (heat, STREAM, GUPS) with native reference implementations."""

from importlib import resources

from .gups import (GupsParams, compute_gups_rate, gups_reference, jump, run_gups,
                   xorshift64)
from .heat import HeatParams, heat_reference, heat_step, initial_field, run_heat
from .results import CSV_HEADER, BenchResult, write_results_csv
from .stream import STREAM_ARRAYS, StreamCheckError, StreamParams, run_stream

BENCHMARKS = ("heat", "stream", "gups")


def chapel_source(name: str):
    """Path of the bundled ``<name>.chpl`` benchmark source."""
    if name not in BENCHMARKS:
        raise ValueError(f"unknown benchmark {name!r}")
    return resources.files(__package__).joinpath("chpl", f"{name}.chpl")
