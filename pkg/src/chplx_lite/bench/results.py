"""Benchmark results and the CSV writer."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

CSV_HEADER = ("threads", "seconds", "rate")


@dataclass
class BenchResult:
    benchmark: str
    threads: int
    seconds: float
    rate: float | None = None
    # kernel output kept for checking; never written to CSV
    output: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.seconds > 0:
            raise ValueError(f"{self.benchmark}: elapsed time must be positive")

    def row(self) -> list[str]:
        return [str(self.threads), repr(float(self.seconds)),
                "" if self.rate is None else repr(float(self.rate))]


def write_results_csv(results, path, append: bool = True) -> None:
    """Write ``threads,seconds,rate`` rows; the header is written once per file."""
    fresh = not append or not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a" if append else "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        if fresh:
            w.writerow(CSV_HEADER)
        for r in results:
            w.writerow(r.row())
