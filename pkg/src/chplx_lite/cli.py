"""Command line driver: ``chplx-lite compile <file.chpl>... -o <dir>``."""

from __future__ import annotations

import argparse
import sys

from .codegen import CodegenProfile, compile_files
from .diagnostics import CompileError


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chplx-lite",
                                 description="Translate Chapel programs to Python.")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compile", help="translate one or more .chpl files")
    c.add_argument("inputs", nargs="+", metavar="file.chpl")
    c.add_argument("-o", "--output", required=True, metavar="DIR",
                   help="directory for the generated files")
    c.add_argument("--no-line-directives", action="store_true",
                   help="omit provenance directives")
    c.add_argument("--directive-style", choices=("line", "trailing"), default="line",
                   help="directive lines before statements, or trailing comments")
    c.add_argument("--indent", type=int, default=4, help="indent width (default 4)")
    c.add_argument("--dump-ast", action="store_true", help="write <stem>.ast.json")
    c.add_argument("--dump-symbols", action="store_true", help="write <stem>.symbols.json")
    c.add_argument("--dump-ir", action="store_true", help="write <stem>.ir.json")
    c.add_argument("--emit-build", action="store_true",
                   help="write a Makefile building a launcher per program")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    profile = CodegenProfile(placement=args.directive_style, indent_width=args.indent,
                             emit_line_directives=not args.no_line_directives)
    dumps = [k for k, on in (("ast", args.dump_ast), ("symbols", args.dump_symbols),
                             ("ir", args.dump_ir)) if on]
    try:
        units = compile_files(args.inputs, args.output, profile,
                              emit_build=args.emit_build, dumps=dumps)
    except CompileError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for u in units:
        print(f"wrote {args.output}/{u.program_file[0]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
