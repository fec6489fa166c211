"""Pass 3: print the output program as Python source calling the runtime.

Each Chapel statement becomes one Python statement, in order, preceded by a
provenance directive (or followed by one, in the trailing style).  Loop and
task bodies become nested functions handed to the runtime through a
decorator, which costs no more lines than the Chapel braces they replace.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .diagnostics import CompileError, Diagnostic, SourceSpan
from .irgen import (MEMBER_NAMES, PY_TYPE, RUNTIME_NAMES, BinOp, Binding, CallX, Cond,
                    DomainX, Expr, IndexX, Lit, MemberX, Name, OutAssign, OutBegin, OutCall,
                    OutCobegin, OutCondChain, OutCoforall, OutDecl, OutExpr, OutFor, OutForall,
                    OutInline, OutProc, OutputProgram, OutReturn, OutWriteln, OutYield,
                    RangeX, TupleX, TypeRef, UnOp, check_lowered)

LINE_TEMPLATE = '#line {line} "{file}"'
TRAILING_TEMPLATE = "# @srcline {file}:{line}"


@dataclass
class CodegenProfile:
    """How the program file is printed.

    ``placement`` is ``line`` (a directive line before each statement) or
    ``trailing`` (a comment at the end of the statement's first line).
    """

    line_directive_template: str | None = None
    indent_width: int = 4
    emit_line_directives: bool = True
    runtime_namespace: str = "chplx_lite.runtime"
    placement: str = "line"

    def __post_init__(self):
        if self.placement not in ("line", "trailing"):
            raise ValueError(f"unknown directive placement {self.placement!r}")
        if self.line_directive_template is None:
            self.line_directive_template = (LINE_TEMPLATE if self.placement == "line"
                                            else TRAILING_TEMPLATE)
        if self.emit_line_directives:
            tmpl = self.line_directive_template
            if "{line}" not in tmpl or "{file}" not in tmpl:
                raise ValueError("directive template needs both {line} and {file}")
            if not tmpl.lstrip().startswith("#"):
                raise ValueError("directives must be Python comments (start with '#')")
        if self.indent_width < 1:
            raise ValueError("indent width must be positive")

    @classmethod
    def trailing(cls, **kw) -> "CodegenProfile":
        return cls(placement="trailing", **kw)

    def directive(self, span: SourceSpan) -> str:
        return self.line_directive_template.format(line=span.line, file=span.file)


@dataclass
class EmittedUnit:
    program_file: tuple[str, str]
    support_files: list[tuple[str, str]]
    build_manifest: tuple[str, str] | None = None
    # (generated line, source line, statement list id) for every directive
    provenance: list[tuple[int, int, int]] = field(default_factory=list)

    def files(self) -> list[tuple[str, str]]:
        out = [self.program_file] + list(self.support_files)
        if self.build_manifest is not None:
            out.append(self.build_manifest)
        return out


# ---------------------------------------------------------------- inlinecxx

def expand_inline_cxx(fmt: str, args: list[str], span: SourceSpan | None = None) -> str:
    """Replace each ``{}`` in *fmt* by the next argument; ``{{``/``}}`` are literal braces."""
    out, k, i, n = [], 0, 0, len(fmt)
    placeholders = 0
    while i < n:
        ch = fmt[i]
        if ch == "{":
            if fmt.startswith("{{", i):
                out.append("{")
                i += 2
                continue
            if fmt.startswith("{}", i):
                placeholders += 1
                if k < len(args):
                    out.append(args[k])
                k += 1
                i += 2
                continue
            raise CompileError([Diagnostic(
                "inlinecxx supports only sequential '{}' placeholders", span or _nowhere())])
        if ch == "}":
            if fmt.startswith("}}", i):
                out.append("}")
                i += 2
                continue
            raise CompileError([Diagnostic("unmatched '}' in inlinecxx format",
                                           span or _nowhere())])
        out.append(ch)
        i += 1
    if placeholders != len(args):
        raise CompileError([Diagnostic(
            f"inlinecxx format has {placeholders} placeholder(s) but {len(args)} "
            f"argument(s) were given", span or _nowhere())])
    return "".join(out)


def _nowhere() -> SourceSpan:
    return SourceSpan.builtin()


# ---------------------------------------------------------------- expressions

ATOM = 100
_PY_BINARY = {
    "||": ("or", 1), "&&": ("and", 2),
    "==": ("==", 4), "!=": ("!=", 4), "<": ("<", 4), "<=": ("<=", 4), ">": (">", 4),
    ">=": (">=", 4),
    "|": ("|", 5), "^": ("^", 6), "&": ("&", 7), ">>": (">>", 8),
    "+": ("+", 9), "-": ("-", 9), "*": ("*", 10), "/": ("/", 10), "**": ("**", 12),
}
_METHOD_OPS = {"by": "by", "#": "count", "align": "align"}
_CALL_OPS = {"/": "idiv", "%": "imod", "<<": "shl"}
_ELEM_PY = {"int": "int", "real": "float", "bool": "bool", "string": "str",
            "complex": "complex"}
_DEFAULTS = {"int": "0", "real": "0.0", "bool": "False", "string": '""', "complex": "0j",
             "range": "Range(1, 0)", "domain": "Domain(Range(1, 0))", "tuple": "()",
             "nil": "None"}


def _int_text(e: Lit) -> str:
    text = e.text
    if re.fullmatch(r"0[0-9_]+", text) and text.strip("0_"):
        return str(e.value)  # decimal literal with a leading zero
    return text


def _lit(e: Lit) -> str:
    t = e.type
    if t == "int":
        return _int_text(e)
    if t == "real":
        try:
            float(e.text)
            return e.text
        except ValueError:
            return repr(float(e.value))
    if t == "string":
        return json.dumps(e.value, ensure_ascii=False)
    if t == "bool":
        return "True" if e.value else "False"
    return e.text


class ExprPrinter:
    """Python text for lowered expressions, parenthesized for Python precedence."""

    def text(self, e: Expr, min_prec: int = 0) -> str:
        s, prec = self._emit(e)
        if e.parens and prec < ATOM:
            s, prec = f"({s})", ATOM
        if prec < min_prec:
            s = f"({s})"
        return s

    def _emit(self, e: Expr) -> tuple[str, int]:
        match e:
            case Name():
                if e.symbol.kind == "builtin-type":
                    return PY_TYPE.get(e.name, e.name), ATOM
                return e.emit, ATOM
            case Lit():
                s = _lit(e)
                return s, (ATOM if not s.startswith("-") else 11)
            case BinOp(op=op) if op in _METHOD_OPS:
                return f"{self.text(e.lhs, ATOM)}.{_METHOD_OPS[op]}({self.text(e.rhs)})", ATOM
            case BinOp(op=op) if op in _CALL_OPS and not (op == "/" and e.type == "real"):
                return f"{_CALL_OPS[op]}({self.text(e.lhs)}, {self.text(e.rhs)})", ATOM
            case BinOp(op=op):
                py, prec = _PY_BINARY[op]
                if op == "**":
                    left, right = prec + 1, prec - 1
                elif prec == 4:
                    left = right = prec + 1  # never chain comparisons
                else:
                    left, right = prec, prec + 1
                return f"{self.text(e.lhs, left)} {py} {self.text(e.rhs, right)}", prec
            case UnOp(op="!"):
                return f"not {self.text(e.operand, 3)}", 3
            case UnOp(op=op):
                return f"{op}{self.text(e.operand, 11)}", 11
            case Cond():
                return (f"{self.text(e.then, 1)} if {self.text(e.cond, 1)} "
                        f"else {self.text(e.other, 0)}"), 0
            case RangeX():
                return self._range(e), ATOM
            case TupleX(elems=xs):
                inner = ", ".join(self.text(x) for x in xs)
                return f"({inner}{',' if len(xs) == 1 else ''})", ATOM
            case DomainX(dims=xs):
                return f"Domain({', '.join(self.text(x) for x in xs)})", ATOM
            case IndexX():
                idx = ", ".join(self.text(x) for x in e.index)
                return f"{self.text(e.base, ATOM)}[{idx}]", ATOM
            case MemberX():
                member = MEMBER_NAMES.get(e.member, e.member)
                return f"{self.text(e.base, ATOM)}.{member}", ATOM
            case CallX():
                args = ", ".join(self.text(a) for a in e.args)
                return f"{self.text(e.callee, ATOM)}({args})", ATOM
        raise TypeError(f"cannot print {type(e).__name__}")

    def _range(self, e: RangeX) -> str:
        low = self.text(e.low) if e.low is not None else "None"
        if e.counted:
            return f"Range({low}).count({self.text(e.high)})"
        if e.high is None:
            return f"Range({low})"
        return f"Range({low}, {self.text(e.high)})"


def _as_real(text: str, e: Expr) -> str:
    """Coerce an int-typed expression stored into a real."""
    if e.type != "int":
        return text
    if isinstance(e, Lit) and re.fullmatch(r"[0-9_]+", e.text):
        return e.text + ".0"
    return f"float({text})"


# ---------------------------------------------------------------- statements

_COMPOUND_HEAD = re.compile(r"^(if |elif |else:|for |while |def |@|with |try:)")


class _Emitter:
    def __init__(self, program: OutputProgram, profile: CodegenProfile):
        self.p = program
        self.profile = profile
        self.x = ExprPrinter()
        self.lines: list[str] = []
        self.provenance: list[tuple[int, int, int]] = []
        self._list_ids = 0

    def ind(self, depth: int) -> str:
        return " " * (self.profile.indent_width * depth)

    def put(self, depth: int, text: str, span: SourceSpan | None = None, list_id: int = 0):
        """Append one line; *span* attaches a provenance directive to it."""
        if span is not None and self.profile.emit_line_directives:
            directive = self.profile.directive(span)
            if self.profile.placement == "line":
                self.lines.append(directive)
                self.provenance.append((len(self.lines), span.line, list_id))
                self.lines.append(self.ind(depth) + text)
            else:
                self.lines.append(f"{self.ind(depth)}{text}  {directive}")
                self.provenance.append((len(self.lines), span.line, list_id))
            return
        self.lines.append(self.ind(depth) + text)

    def program(self) -> str:
        features = sorted(RUNTIME_NAMES[f] for f in self.p.used_features)
        head = []
        if features:
            head.append(f"from {self.profile.runtime_namespace} import {', '.join(features)}")
            head.append("")
        head.append(f"def {module_function(self.p.module_name)}():")
        self.block(self.p.body, 1)
        return "\n".join(head + self.lines) + "\n"

    def block(self, body: list, depth: int, nonlocals=()):
        self._list_ids += 1
        list_id = self._list_ids
        start = len(self.lines)
        for n in body:
            self.stmt(n, depth, list_id)
        if nonlocals:
            decl = f"nonlocal {', '.join(nonlocals)}"
            first = self._first_code_line(start)
            if first is not None and not _COMPOUND_HEAD.match(self.lines[first].lstrip()):
                line = self.lines[first]
                stripped = line.lstrip()
                self.lines[first] = line[:len(line) - len(stripped)] + f"{decl}; {stripped}"
            else:
                self.lines.insert(start, self.ind(depth) + decl)
                self.provenance = [(g + 1 if g > start else g, s, k)
                                   for g, s, k in self.provenance]
        if len(self.lines) == start:
            self.lines.append(self.ind(depth) + "pass")

    def _first_code_line(self, start: int) -> int | None:
        for i in range(start, len(self.lines)):
            if not self.lines[i].lstrip().startswith("#"):
                return i
        return None

    # -- one statement --------------------------------------------------
    def stmt(self, n, depth: int, list_id: int):
        span = n.origin_span
        x = self.x
        match n:
            case OutDecl():
                self.put(depth, self.decl(n), span, list_id)
            case OutAssign():
                self.put(depth, self.assign(n), span, list_id)
            case OutExpr(expr=e):
                self.put(depth, x.text(e), span, list_id)
            case OutCall(call=c):
                self.put(depth, x.text(c), span, list_id)
            case OutWriteln(args=args):
                self.put(depth, f"writeln({', '.join(x.text(a) for a in args)})", span,
                         list_id)
            case OutInline():
                text = expand_inline_cxx(n.format, [x.text(a) for a in n.args], span)
                parts = text.split("\n")
                self.put(depth, parts[0], span, list_id)
                for extra in parts[1:]:
                    self.put(depth, extra)
            case OutReturn(value=v):
                self.put(depth, "return" + ("" if v is None else " " + x.text(v)), span,
                         list_id)
            case OutYield(value=v):
                self.put(depth, f"yield {x.text(v)}", span, list_id)
            case OutFor():
                head = f"for {self.index(n.index)} in {x.text(n.iterable)}:"
                self.compound(head, n.body, depth, span, list_id)
            case OutForall() | OutCoforall():
                fn = "forall" if isinstance(n, OutForall) else "coforall"
                star = ", star=True" if n.tuple_index else ""
                self.put(depth, f"@{fn}({x.text(n.iterable)}{star})", span, list_id)
                params = ", ".join(b.emit for b in n.index)
                self.compound(f"def _{n.scope_name}({params}):", n.body, depth,
                              span if self.same_line(n.body, span) else None, list_id,
                              directive=False)
            case OutBegin():
                self.begin(n, depth, list_id)
            case OutCobegin():
                self.cobegin(n, depth, list_id)
            case OutCondChain():
                for i, (cond, body, cspan) in enumerate(n.clauses):
                    kw = "if" if i == 0 else "elif"
                    self.compound(f"{kw} {x.text(cond)}:", body, depth, cspan, list_id,
                                  directive=i == 0)
                if n.else_body is not None:
                    self.compound("else:", n.else_body, depth, n.else_span, list_id,
                                  directive=False)
            case OutProc():
                self.put(depth, self.proc_head(n), span, list_id)
                self.block(n.body, depth + 1, n.nonlocals)
            case _:
                raise TypeError(f"cannot emit {type(n).__name__}")

    def same_line(self, body: list, span: SourceSpan | None) -> bool:
        return (span is not None and len(body) == 1 and
                body[0].origin_span.line == span.line and self._one_liner(body) is not None)

    def compound(self, head: str, body: list, depth: int, span, list_id: int,
                 directive: bool = True):
        """``head`` plus its body; a simple body written on the header's source
        line stays on the header's line."""
        if self.same_line(body, span):
            self.put(depth, f"{head} {self._one_liner(body)}", span if directive else None,
                     list_id)
            return
        self.put(depth, head, span if directive else None, list_id)
        self.block(body, depth + 1)

    def index(self, index: list[Binding]) -> str:
        return ", ".join(b.emit for b in index)

    def type_default(self, t: TypeRef) -> str:
        if t.is_array:
            dims = [self.x.text(d) for d in t.dims]
            dom = dims[0] if len(dims) == 1 else f"({', '.join(dims)})"
            if t.elem.qualifier == "atomic":
                return f"AtomicArray({dom})"
            return f"Array({dom}, {_ELEM_PY.get(t.elem.name, 'object')})"
        if t.qualifier == "atomic":
            return "Atomic(False, bool)" if t.name == "bool" else "Atomic(0)"
        if t.qualifier == "sync":
            return "Sync()"
        if t.qualifier == "single":
            return "Single()"
        return _DEFAULTS[t.name]

    def decl(self, n: OutDecl) -> str:
        name = n.target.emit
        t = n.type_ref
        x = self.x
        if n.decl_kind == "config":
            init = n.init
            if t is not None:
                default = _as_real(x.text(init), init) if t.name == "real" else x.text(init)
                return (f'{name}: {PY_TYPE[t.name]} = config_const("{n.target.name}", '
                        f"{default}, {PY_TYPE[t.name]})")
            return f'{name} = config_const("{n.target.name}", {x.text(init)})'
        if t is None:
            init = x.text(n.init)
            if isinstance(n.init, Name) and (n.init.type or "").startswith("array["):
                init = f"{init}.copy()"  # arrays are values
            return f"{name} = {init}"
        if t.is_array:
            base = self.type_default(t)
            if n.init is None:
                return f"{name} = {base}"
            return f"{name} = {base[:-1]}, {x.text(n.init)})"
        if t.qualifier:
            if n.init is None:
                return f"{name} = {self.type_default(t)}"
            ctor = {"atomic": "Atomic", "sync": "Sync", "single": "Single"}[t.qualifier]
            extra = ", bool" if t.qualifier == "atomic" and t.name == "bool" else ""
            return f"{name} = {ctor}({x.text(n.init)}{extra})"
        if n.init is None:
            value = _DEFAULTS[t.name]
        else:
            value = x.text(n.init)
            if t.name == "real":
                value = _as_real(value, n.init)
        return f"{name}: {PY_TYPE[t.name]} = {value}"

    def assign(self, n: OutAssign) -> str:
        x = self.x
        tgt, val = x.text(n.target, ATOM), x.text(n.value)
        op = n.op
        if op == "<=>" and n.whole_array:
            return f"{tgt}.swap({val})"
        if op == "<=>":
            return f"{tgt}, {val} = {x.text(n.value, ATOM)}, {tgt}"
        if n.whole_array:
            return f"{tgt}[...] = {val}"
        if op == "=":
            if n.target.type == "real":
                val = _as_real(val, n.value)
            return f"{tgt} = {val}"
        base = op[:-1]
        if base in _CALL_OPS and not (base == "/" and n.target.type == "real"):
            return f"{tgt} = {_CALL_OPS[base]}({tgt}, {val})"
        if base in ("&&", "||"):
            py = _PY_BINARY[base][0]
            return f"{tgt} = {tgt} {py} {x.text(n.value, _PY_BINARY[base][1] + 1)}"
        return f"{tgt} {op} {val}"

    def proc_head(self, n: OutProc) -> str:
        params = []
        for b in n.params:
            if b.emit == n.variadic:
                params.append(f"*{b.emit}")
            elif b.type_ref is not None and not b.type_ref.is_array and \
                    not b.type_ref.qualifier:
                params.append(f"{b.emit}: {PY_TYPE[b.type_ref.name]}")
            else:
                params.append(b.emit)
        head = f"def {n.target.emit}({', '.join(params)})"
        if n.ret is not None and not n.is_iter and not n.ret.is_array and not n.ret.qualifier:
            head += f" -> {PY_TYPE[n.ret.name]}"
        return head + ":"

    def _one_liner(self, body: list) -> str | None:
        """Single simple statement as text, or None."""
        if len(body) != 1:
            return None
        n = body[0]
        match n:
            case OutDecl():
                return self.decl(n)
            case OutAssign():
                return self.assign(n)
            case OutExpr(expr=e):
                return self.x.text(e)
            case OutCall(call=c):
                return self.x.text(c)
            case OutWriteln(args=args):
                return f"writeln({', '.join(self.x.text(a) for a in args)})"
        return None

    def _lambda_body(self, body: list, nonlocals) -> str | None:
        if nonlocals or len(body) != 1 or not isinstance(body[0], (OutExpr, OutCall,
                                                                    OutWriteln)):
            return None
        return self._one_liner(body)

    def begin(self, n: OutBegin, depth: int, list_id: int):
        simple = self._lambda_body(n.body, n.nonlocals)
        if simple is not None:
            self.put(depth, f"begin(lambda: {simple})", n.origin_span, list_id)
            return
        self.put(depth, "@begin", n.origin_span, list_id)
        self.put(depth, f"def _{n.scope_name}():")
        self.block(n.body, depth + 1, n.nonlocals)

    def cobegin(self, n: OutCobegin, depth: int, list_id: int):
        self._list_ids += 1
        task_list = self._list_ids
        callees = []
        line = n.origin_span.line
        for k, task in enumerate(n.tasks):
            simple = self._lambda_body(task.body, task.nonlocals)
            if simple is not None:
                callees.append(f"lambda: {simple}")
                continue
            fname = f"_cobegin_{line}_{k}"
            callees.append(fname)
            one = self._one_liner(task.body)
            if one is not None:
                prefix = f"nonlocal {', '.join(task.nonlocals)}; " if task.nonlocals else ""
                self.put(depth, f"def {fname}(): {prefix}{one}", task.span, task_list)
            else:
                self.put(depth, f"def {fname}():", task.span, task_list)
                self.block(task.body, depth + 1, task.nonlocals)
        self.put(depth, f"cobegin({', '.join(callees)})", n.origin_span, list_id)


def module_function(module_name: str) -> str:
    """Python identifier used for the module's body function and file stem."""
    name = re.sub(r"\W", "_", module_name)
    if not name or name[0].isdigit():
        name = "_" + name
    return name


def emit_driver(p: OutputProgram, profile: CodegenProfile) -> str:
    fn = module_function(p.module_name)
    configs = ", ".join(f'"{c.name}"' for c in p.config_consts)
    if len(p.config_consts) == 1:
        configs += ","
    return (f"import sys\n"
            f"from {profile.runtime_namespace} import run_program\n"
            f"from {fn} import {fn}\n"
            f"sys.exit(run_program({fn}, sys.argv[1:], configs=({configs})))\n")


def emit_program(p: OutputProgram, profile: CodegenProfile | None = None) -> EmittedUnit:
    """Print *p*; raises CompileError when the lowered program is inconsistent."""
    profile = profile or CodegenProfile()
    problems = check_lowered(p)
    if problems:
        raise CompileError(problems)
    em = _Emitter(p, profile)
    text = em.program()
    stem = module_function(p.module_name)
    return EmittedUnit((f"{stem}.py", text), [(f"{stem}_main.py", emit_driver(p, profile))],
                       provenance=[(g + (2 if p.used_features else 0) + 1, s, k)
                                   for g, s, k in em.provenance])


# ---------------------------------------------------------------- build manifest

def build_manifest_text(stems: list[str]) -> str:
    lines = [f"# Build file for {', '.join(stems)}; generated, do not edit.",
             "PYTHON ?= python3", "",
             f"all: {' '.join(stems)}", ""]
    for stem in stems:
        lines += [
            f"{stem}: {stem}.py {stem}_main.py",
            '\t$(PYTHON) -c "import chplx_lite.runtime"',
            f"\t$(PYTHON) -O -m py_compile {stem}.py {stem}_main.py",
            f"\tprintf '#!/bin/sh\\nexec \"%s\" -O \"%s/%s\" \"$$@\"\\n' "
            f"\"$(PYTHON)\" \"$(CURDIR)\" {stem}_main.py > {stem}",
            f"\tchmod +x {stem}",
            "",
        ]
    lines += ["clean:", f"\trm -f {' '.join(stems)}", "\trm -rf __pycache__", "",
              ".PHONY: all clean"]
    return "\n".join(lines) + "\n"


def emit_build_manifest(programs, out_dir) -> tuple[str, str]:
    """Write a Makefile with one target per program into *out_dir*."""
    if isinstance(programs, OutputProgram):
        programs = [programs]
    stems = [module_function(p.module_name) for p in programs]
    path = os.path.join(str(out_dir), "Makefile")
    text = build_manifest_text(stems)
    Path(path).write_text(text)
    return path, text


# ---------------------------------------------------------------- whole pipeline

@dataclass
class CompileResult:
    unit: EmittedUnit
    ast: object
    symbols: object
    program: OutputProgram


def translate(source: str, file: str, profile: CodegenProfile | None = None) -> CompileResult:
    """Run all passes in memory."""
    from .frontend import parse_source
    from .irgen import lower_program
    from .symtab import build_program_symbol_table
    ast = parse_source(source, file)
    table = build_program_symbol_table(ast)
    program = lower_program(ast, table)
    unit = emit_program(program, profile)
    return CompileResult(unit, ast, table, program)


def compile_file(input_path, out_dir, profile: CodegenProfile | None = None,
                 emit_build: bool = True, dumps=()) -> EmittedUnit:
    """Compile one file and write its outputs; see :func:`compile_files`."""
    return compile_files([input_path], out_dir, profile, emit_build, dumps)[0]


def compile_files(inputs, out_dir, profile: CodegenProfile | None = None,
                  emit_build: bool = True, dumps=()) -> list[EmittedUnit]:
    """Compile every input; nothing is written unless all of them succeed.

    *dumps* may contain ``ast``, ``symbols`` and ``ir``; each writes
    ``<stem>.<kind>.json`` next to the generated program.
    """
    results, diags = [], []
    for path in inputs:
        try:
            source = Path(path).read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise OSError(f"{path}: not UTF-8 text ({exc.reason})") from None
        try:
            results.append(translate(source, os.path.basename(str(path)), profile))
        except CompileError as exc:
            diags.extend(exc.diagnostics)
    if diags:
        raise CompileError(diags)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    units = []
    for r in results:
        stem = module_function(r.program.module_name)
        for name, text in r.unit.files():
            (out / name).write_text(text)
        if "ast" in dumps:
            (out / f"{stem}.ast.json").write_text(json.dumps(r.ast.to_json(), indent=2) + "\n")
        if "symbols" in dumps:
            (out / f"{stem}.symbols.json").write_text(r.symbols.dumps() + "\n")
        if "ir" in dumps:
            (out / f"{stem}.ir.json").write_text(r.program.dumps() + "\n")
        units.append(r.unit)
    if emit_build and results:
        manifest = emit_build_manifest([r.program for r in results], out)
        for u in units:
            u.build_manifest = manifest
    return units
