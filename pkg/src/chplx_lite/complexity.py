"""Line counting and COCOMO schedule estimates for Chapel inputs and generated code."""

from __future__ import annotations

import argparse
import csv
import re
import statistics
import sys
from dataclasses import dataclass
from pathlib import Path

# basic COCOMO, organic mode
COCOMO_A, COCOMO_B, COCOMO_C, COCOMO_D = 2.4, 1.05, 2.5, 0.38

DIRECTIVE_RE = re.compile(r'^#line \d+ "[^"]*"\s*$')


@dataclass
class LocCount:
    file: str
    code: int = 0
    comment: int = 0
    blank: int = 0

    @property
    def total(self) -> int:
        return self.code + self.comment + self.blank


def _chapel_kinds(lines):
    """Yield 'code', 'comment' or 'blank' per line of Chapel text."""
    in_block = 0  # block comments do not nest
    for line in lines:
        has_code = has_comment = False
        i, n = 0, len(line)
        quote = None
        while i < n:
            ch = line[i]
            if in_block:
                has_comment = True
                if line.startswith("*/", i):
                    in_block = 0
                    i += 2
                else:
                    i += 1
            elif quote:
                has_code = True
                if ch == "\\":
                    i += 2
                    continue
                if ch == quote:
                    quote = None
                i += 1
            elif line.startswith("//", i):
                has_comment = True
                break
            elif line.startswith("/*", i):
                has_comment = True
                in_block = 1
                i += 2
            else:
                if ch in "\"'":
                    quote = ch
                if not ch.isspace():
                    has_code = True
                i += 1
        if has_code:
            yield "code"
        elif has_comment:
            yield "comment"
        elif in_block:
            yield "comment"  # blank line inside a block comment
        else:
            yield "blank"


def _python_kinds(lines, exclude_directives: bool):
    for line in lines:
        s = line.strip()
        if not s:
            yield "blank"
        elif s.startswith("#"):
            if DIRECTIVE_RE.match(s) and not exclude_directives:
                yield "code"
            else:
                yield "comment"
        else:
            yield "code"


def _language(path: str) -> str:
    return "chapel" if str(path).endswith(".chpl") else "target"


def count_text(text: str, language: str, exclude_line_directives: bool = False,
               name: str = "<text>") -> LocCount:
    lines = text.splitlines()
    if language == "chapel":
        kinds = _chapel_kinds(lines)
    elif language == "target":
        kinds = _python_kinds(lines, exclude_line_directives)
    else:
        raise ValueError(f"unknown language {language!r}")
    c = LocCount(name)
    for k in kinds:
        setattr(c, k, getattr(c, k) + 1)
    return c


def count_loc(path, language: str | None = None,
              exclude_line_directives: bool = False) -> LocCount:
    """Classify every physical line of *path* as code, comment or blank.

    Lines holding both code and a comment are code.  ``#line`` provenance
    directives count as code unless *exclude_line_directives* is set, in
    which case they count as comments.
    """
    text = Path(path).read_text(encoding="utf-8")
    return count_text(text, language or _language(path), exclude_line_directives, str(path))


def cocomo_effort(kloc: float, a: float = COCOMO_A, b: float = COCOMO_B) -> float:
    """Person-months for *kloc* thousand lines."""
    if kloc < 0:
        raise ValueError("kloc must be non-negative")
    return a * kloc ** b


def cocomo_schedule(effort: float, c: float = COCOMO_C, d: float = COCOMO_D) -> float:
    """Calendar months for *effort* person-months."""
    if effort < 0:
        raise ValueError("effort must be non-negative")
    return c * effort ** d


def estimated_schedule(loc: int) -> float:
    return cocomo_schedule(cocomo_effort(loc / 1000.0))


@dataclass
class BenchmarkComplexity:
    benchmark: str
    chapel_loc: int
    cpp_loc: int            # generated program file
    boilerplate_loc: int    # program file plus support files

    @property
    def loc_gap(self) -> int:
        return self.cpp_loc - self.chapel_loc

    @property
    def chapel_ese(self) -> float:
        return estimated_schedule(self.chapel_loc)

    @property
    def cpp_ese(self) -> float:
        return estimated_schedule(self.cpp_loc)

    @property
    def boilerplate_ese(self) -> float:
        return estimated_schedule(self.boilerplate_loc)

    @property
    def ese_gap(self) -> float:
        return self.cpp_ese - self.chapel_ese

    def row(self) -> list:
        return [self.benchmark, self.chapel_loc, self.cpp_loc, self.boilerplate_loc,
                f"{self.chapel_ese:.6f}", f"{self.cpp_ese:.6f}", f"{self.boilerplate_ese:.6f}"]


@dataclass
class ComplexityReport:
    rows: list

    CSV_HEADER = ("benchmark", "chapel_loc", "cpp_loc", "boilerplate_loc", "chapel_ese",
                  "cpp_ese", "boilerplate_ese")

    @property
    def max_loc_gap(self) -> int:
        return max((r.loc_gap for r in self.rows), default=0)

    def ese_gaps(self, boilerplate: bool = False) -> list[float]:
        if boilerplate:
            return [abs(r.boilerplate_ese - r.chapel_ese) for r in self.rows]
        return [abs(r.ese_gap) for r in self.rows]

    def mean_ese_gap(self, boilerplate: bool = False) -> float:
        gaps = self.ese_gaps(boilerplate)
        return statistics.fmean(gaps) if gaps else 0.0

    def median_ese_gap(self, boilerplate: bool = False) -> float:
        gaps = self.ese_gaps(boilerplate)
        return statistics.median(gaps) if gaps else 0.0

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(self.CSV_HEADER)
            for r in self.rows:
                w.writerow(r.row())

    def table(self) -> str:
        head = f"{'benchmark':<12}{'chapel':>8}{'program':>9}{'boiler':>8}" \
               f"{'ESE chpl':>10}{'ESE prog':>10}{'ESE boil':>10}{'gap':>6}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(f"{r.benchmark:<12}{r.chapel_loc:>8}{r.cpp_loc:>9}"
                         f"{r.boilerplate_loc:>8}{r.chapel_ese:>10.3f}{r.cpp_ese:>10.3f}"
                         f"{r.boilerplate_ese:>10.3f}{r.loc_gap:>6}")
        lines.append(f"ESE gap (program - chapel): mean {self.mean_ese_gap():.4f}, "
                     f"median {self.median_ese_gap():.4f}")
        lines.append(f"ESE gap (boilerplate - chapel): mean "
                     f"{self.mean_ese_gap(True):.4f}, median {self.median_ese_gap(True):.4f}")
        return "\n".join(lines)


def _stem(path) -> str:
    name = Path(path).name
    return name.split(".", 1)[0]


def report_complexity(chapel_files, program_files, support_files=(),
                      exclude_line_directives: bool = False) -> ComplexityReport:
    """One row per Chapel file, matched to generated files by stem.

    A support file belongs to a benchmark when its stem starts with the
    benchmark's stem (``heat_main.py`` goes with ``heat.chpl``).
    """
    programs = {_stem(p): p for p in program_files}
    rows = []
    for chpl in chapel_files:
        stem = _stem(chpl)
        if stem not in programs:
            raise ValueError(f"no generated program file for {chpl}")
        chapel = count_loc(chpl, "chapel").code
        prog = count_loc(programs[stem], "target", exclude_line_directives).code
        support = sum(count_loc(s, _language(s), exclude_line_directives).code
                      for s in support_files if _stem(s) == stem or
                      _stem(s).startswith(stem + "_"))
        rows.append(BenchmarkComplexity(stem, chapel, prog, prog + support))
    return ComplexityReport(rows)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chplx-complexity",
                                 description="Lines of code and COCOMO schedule estimates.")
    ap.add_argument("--chapel", nargs="+", required=True, metavar="FILE")
    ap.add_argument("--generated", nargs="+", required=True, metavar="FILE")
    ap.add_argument("--support", nargs="*", default=[], metavar="FILE")
    ap.add_argument("--exclude-line-directives", action="store_true",
                    help="count #line directives as comments")
    ap.add_argument("--csv", required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = report_complexity(args.chapel, args.generated, args.support,
                                   args.exclude_line_directives)
        report.write_csv(args.csv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.table())
    return 0


if __name__ == "__main__":
    sys.exit(main())
