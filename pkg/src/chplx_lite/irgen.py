"""Pass 2: lower the normalized AST to the output-program tree.

Every output node carries the source span it came from and the symbols its
own expressions reference, already resolved against the program symbol
table, so the code generator never performs a lookup.  Expressions are
lowered into a small typed expression tree (``Name``, ``BinOp``, ...); the
types are the literal/annotation-driven ones below and ``None`` when unknown.
"""

from __future__ import annotations

import json
import keyword
from dataclasses import dataclass, field, fields

from .diagnostics import CompileError, Diagnostic, SourceSpan
from .frontend.ast import LOOP_KINDS, Node
from .symtab import BUILTIN_TYPES, ProgramSymbolTable, Symbol, resolve_symbol

# Names of the runtime facilities a program can use.  The value is the Python
# name imported from the runtime package.
RUNTIME_NAMES = {
    "forall": "forall", "coforall": "coforall", "begin": "begin", "cobegin": "cobegin",
    "zip": "zip", "range": "Range", "domain": "Domain", "array": "Array",
    "atomic_array": "AtomicArray", "atomic": "Atomic", "sync": "Sync", "single": "Single",
    "writeln": "writeln", "config": "config_const", "idiv": "idiv", "imod": "imod",
    "shl": "shl", "here": "here", "sqrt": "sqrt",
}

SCALAR_TYPES = ("int", "real", "bool", "string", "complex")
PY_TYPE = {"int": "int", "real": "float", "bool": "bool", "string": "str",
           "complex": "complex", "range": "Range", "domain": "Domain", "tuple": "tuple",
           "nil": "None"}

# Chapel method names that are spelled differently in the runtime
MEMBER_NAMES = {
    "fetchAdd": "fetch_add", "fetchSub": "fetch_sub", "fetchXor": "fetch_xor",
    "fetchAnd": "fetch_and", "fetchOr": "fetch_or", "compareExchange": "compare_exchange",
    "testAndSet": "test_and_set", "waitFor": "wait_for", "and": "and_", "or": "or_",
    "writeEF": "write_ef", "readFE": "read_fe", "readFF": "read_ff", "readXX": "read_xx",
    "writeXF": "write_xf", "writeFF": "write_ff", "isFull": "is_full",
    "maxTaskPar": "max_task_par", "numPUs": "num_pus",
}

_COMPARISONS = ("==", "!=", "<", "<=", ">", ">=")
_RESERVED = frozenset(keyword.kwlist) | {"print", "len", "float", "str", "tuple", "range",
                                         "sys", "self"}


# ---------------------------------------------------------------- types

@dataclass(kw_only=True)
class TypeRef:
    name: str
    qualifier: str | None = None
    dims: list = field(default_factory=list)   # array dimensions (expressions)
    elem: "TypeRef | None" = None

    @property
    def is_array(self) -> bool:
        return self.name == "array"

    def describe(self) -> str:
        if self.is_array:
            return f"array[{self.elem.describe()}]"
        return f"{self.qualifier} {self.name}" if self.qualifier else self.name


# ---------------------------------------------------------------- expressions

@dataclass(kw_only=True)
class Expr:
    span: SourceSpan
    type: str | None = None
    parens: int = 0


@dataclass(kw_only=True)
class Name(Expr):
    name: str
    emit: str
    symbol: Symbol = field(repr=False)


@dataclass(kw_only=True)
class Lit(Expr):
    value: object
    text: str


@dataclass(kw_only=True)
class BinOp(Expr):
    op: str
    lhs: Expr
    rhs: Expr


@dataclass(kw_only=True)
class UnOp(Expr):
    op: str
    operand: Expr


@dataclass(kw_only=True)
class Cond(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass(kw_only=True)
class RangeX(Expr):
    low: Expr | None
    high: Expr | None
    counted: bool = False


@dataclass(kw_only=True)
class TupleX(Expr):
    elems: list


@dataclass(kw_only=True)
class DomainX(Expr):
    dims: list


@dataclass(kw_only=True)
class IndexX(Expr):
    base: Expr
    index: list


@dataclass(kw_only=True)
class MemberX(Expr):
    base: Expr
    member: str


@dataclass(kw_only=True)
class CallX(Expr):
    callee: Expr
    args: list


def sub_exprs(e: Expr):
    """Direct sub-expressions of *e*."""
    match e:
        case BinOp(lhs=a, rhs=b):
            return [a, b]
        case UnOp(operand=a):
            return [a]
        case Cond(cond=a, then=b, other=c):
            return [a, b, c]
        case RangeX(low=lo, high=hi):
            return [x for x in (lo, hi) if x is not None]
        case TupleX(elems=xs) | DomainX(dims=xs):
            return list(xs)
        case IndexX(base=b, index=xs):
            return [b] + list(xs)
        case MemberX(base=b):
            return [b]
        case CallX(callee=c, args=xs):
            return [c] + list(xs)
    return []


def walk_expr(e: Expr):
    stack = [e]
    while stack:
        x = stack.pop()
        yield x
        stack.extend(reversed(sub_exprs(x)))


# ---------------------------------------------------------------- output nodes

@dataclass(kw_only=True)
class OutputNode:
    origin_span: SourceSpan
    resolved_symbols: list = field(default_factory=list)  # (name, Symbol) pairs


@dataclass(kw_only=True)
class Binding:
    """A name introduced by a node: declared variable, loop index or parameter."""
    name: str
    emit: str
    symbol: Symbol = field(repr=False)
    type_ref: TypeRef | None = None


@dataclass(kw_only=True)
class OutDecl(OutputNode):
    target: Binding
    decl_kind: str            # var, const or config
    type_ref: TypeRef | None
    init: Expr | None
    inferred: str | None      # type used when the declaration has no annotation


@dataclass(kw_only=True)
class OutAssign(OutputNode):
    target: Expr
    op: str
    value: Expr
    whole_array: bool = False


@dataclass(kw_only=True)
class OutExpr(OutputNode):
    expr: Expr


@dataclass(kw_only=True)
class OutCall(OutputNode):
    call: CallX


@dataclass(kw_only=True)
class OutInline(OutputNode):
    format: str
    args: list


@dataclass(kw_only=True)
class OutLoop(OutputNode):
    index: list               # Bindings
    tuple_index: bool
    iterable: Expr
    body: list
    scope_name: str


@dataclass(kw_only=True)
class OutFor(OutLoop):
    pass


@dataclass(kw_only=True)
class OutForall(OutLoop):
    pass


@dataclass(kw_only=True)
class OutCoforall(OutLoop):
    pass


@dataclass(kw_only=True)
class OutBegin(OutputNode):
    body: list
    scope_name: str
    nonlocals: list = field(default_factory=list)


@dataclass(kw_only=True)
class CobeginTask:
    body: list
    span: SourceSpan
    nonlocals: list = field(default_factory=list)


@dataclass(kw_only=True)
class OutCobegin(OutputNode):
    tasks: list               # CobeginTask
    scope_name: str


@dataclass(kw_only=True)
class OutCondChain(OutputNode):
    clauses: list             # (condition Expr, body list, clause span)
    else_body: list | None
    else_span: SourceSpan | None = None


@dataclass(kw_only=True)
class OutProc(OutputNode):
    target: Binding
    params: list              # Bindings (type_ref may be None)
    variadic: str | None
    ret: TypeRef | None
    body: list
    is_iter: bool
    nonlocals: list = field(default_factory=list)


@dataclass(kw_only=True)
class OutReturn(OutputNode):
    value: Expr | None


@dataclass(kw_only=True)
class OutYield(OutputNode):
    value: Expr


@dataclass(kw_only=True)
class OutWriteln(OutputNode):
    args: list


OUTPUT_NODE_TYPES = (OutDecl, OutAssign, OutExpr, OutCall, OutInline, OutForall,
                     OutCoforall, OutFor, OutBegin, OutCobegin, OutCondChain, OutProc,
                     OutReturn, OutWriteln, OutYield)


@dataclass
class ConfigConst:
    name: str
    emit: str
    type: str | None
    default: str              # source text of the default


@dataclass
class OutputProgram:
    module_name: str
    file: str
    body: list
    config_consts: list = field(default_factory=list)
    used_features: set = field(default_factory=set)

    def to_json(self) -> dict:
        return {"moduleName": self.module_name, "file": self.file,
                "configConsts": [vars(c) for c in self.config_consts],
                "usedFeatures": sorted(self.used_features),
                "body": [_to_json(n) for n in self.body]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _to_json(x):
    if isinstance(x, SourceSpan):
        return x.to_json()
    if isinstance(x, Symbol):
        return {"name": x.name, "kind": x.kind, "declSpan": x.decl_span.to_json()}
    if isinstance(x, (OutputNode, Expr, TypeRef, Binding, CobeginTask)):
        out = {"node": type(x).__name__}
        for f in fields(x):
            v = getattr(x, f.name)
            if f.name == "resolved_symbols":
                out["resolvedSymbols"] = [n for n, _ in v]
            elif f.name == "symbol":
                continue
            else:
                out[f.name] = _to_json(v)
        return out
    if isinstance(x, (list, tuple)):
        return [_to_json(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return repr(x)


# ---------------------------------------------------------------- traversal helpers

def child_bodies(n: OutputNode) -> list[list]:
    """Nested statement lists of *n*."""
    match n:
        case OutLoop(body=b) | OutBegin(body=b) | OutProc(body=b):
            return [b]
        case OutCobegin(tasks=ts):
            return [t.body for t in ts]
        case OutCondChain(clauses=cs, else_body=e):
            return [b for _, b, _ in cs] + ([e] if e is not None else [])
    return []


def walk_nodes(body):
    for n in body:
        yield n
        for b in child_bodies(n):
            yield from walk_nodes(b)


def node_exprs(n: OutputNode) -> list[Expr]:
    """Expressions owned directly by *n* (not by nested statements)."""
    match n:
        case OutDecl(init=i, type_ref=t):
            return ([i] if i is not None else []) + _type_exprs(t)
        case OutAssign(target=a, value=b):
            return [a, b]
        case OutExpr(expr=e):
            return [e]
        case OutCall(call=c):
            return [c]
        case OutInline(args=xs) | OutWriteln(args=xs):
            return list(xs)
        case OutLoop(iterable=e):
            return [e]
        case OutCondChain(clauses=cs):
            return [c for c, _, _ in cs]
        case OutProc(params=ps, ret=r):
            out = []
            for p in ps:
                out += _type_exprs(p.type_ref)
            return out + _type_exprs(r)
        case OutReturn(value=v):
            return [v] if v is not None else []
        case OutYield(value=v):
            return [v]
    return []


def _type_exprs(t: TypeRef | None) -> list[Expr]:
    if t is None:
        return []
    return list(t.dims) + _type_exprs(t.elem)


def node_bindings(n: OutputNode) -> list[Binding]:
    match n:
        case OutDecl(target=b):
            return [b]
        case OutLoop(index=ix):
            return list(ix)
        case OutProc(target=b, params=ps):
            return [b] + list(ps)
    return []


def referenced_names(n: OutputNode) -> set[str]:
    names = {b.name for b in node_bindings(n)}
    for e in node_exprs(n):
        for x in walk_expr(e):
            if isinstance(x, Name):
                names.add(x.name)
    return names


# ---------------------------------------------------------------- features

def _type_features(t: TypeRef | None, out: set):
    if t is None:
        return
    if t.is_array:
        out.add("atomic_array" if t.elem.qualifier == "atomic" else "array")
        for d in t.dims:
            _expr_features(d, out)
        return
    if t.qualifier:
        out.add(t.qualifier)
    elif t.name in ("range", "domain"):
        out.add("range")
        if t.name == "domain":
            out.add("domain")


def _expr_features(e: Expr, out: set):
    for x in walk_expr(e):
        match x:
            case RangeX():
                out.add("range")
            case DomainX():
                out.add("domain")
            case BinOp(op="/") if x.type != "real":
                out.add("idiv")
            case BinOp(op="%"):
                out.add("imod")
            case BinOp(op="<<"):
                out.add("shl")
            case Name(symbol=s) if s.kind != "variable" or s.decl_span.is_builtin:
                if s.decl_span.is_builtin and s.name in ("zip", "here", "sqrt"):
                    out.add(s.name)


def reachable_features(body) -> set[str]:
    """Runtime facilities the emitted form of *body* uses."""
    out: set[str] = set()
    for n in walk_nodes(body):
        for e in node_exprs(n):
            _expr_features(e, out)
        match n:
            case OutForall():
                out.add("forall")
            case OutCoforall():
                out.add("coforall")
            case OutBegin():
                out.add("begin")
            case OutCobegin():
                out.add("cobegin")
            case OutWriteln():
                out.add("writeln")
            case OutDecl(decl_kind="config"):
                out.add("config")
            case OutAssign(op="/=") if n.target.type != "real":
                out.add("idiv")
            case OutAssign(op="%="):
                out.add("imod")
            case OutAssign(op="<<="):
                out.add("shl")
        if isinstance(n, OutDecl):
            _type_features(n.type_ref, out)
        elif isinstance(n, OutProc):
            for p in n.params:
                _type_features(p.type_ref, out)
            _type_features(n.ret, out)
    return out


# ---------------------------------------------------------------- checking

def check_lowered(p: OutputProgram) -> list[Diagnostic]:
    """Diagnostics for broken invariants; empty when the program is well formed."""
    diags = []
    for n in walk_nodes(p.body):
        if not isinstance(n, OUTPUT_NODE_TYPES):
            diags.append(Diagnostic(f"unknown output node {type(n).__name__}",
                                    getattr(n, "origin_span", SourceSpan.builtin())))
            continue
        have = {name for name, _ in n.resolved_symbols}
        for name in sorted(referenced_names(n) - have):
            diags.append(Diagnostic(f"'{name}' is not among the node's resolved symbols",
                                    n.origin_span))
        if n.origin_span.is_builtin or n.origin_span.file != p.file:
            diags.append(Diagnostic("node has no origin in the input file", n.origin_span))
    expected = reachable_features(p.body)
    for f in sorted(expected - p.used_features):
        diags.append(Diagnostic(f"feature '{f}' is used but not listed", SourceSpan.builtin()))
    for f in sorted(p.used_features - expected):
        diags.append(Diagnostic(f"feature '{f}' is listed but not used", SourceSpan.builtin()))
    return diags


# ---------------------------------------------------------------- lowering

def _arith(a: str | None, b: str | None) -> str | None:
    if a is None or b is None:
        return None
    if "complex" in (a, b):
        return "complex"
    if "real" in (a, b):
        return "real" if {a, b} <= {"int", "real"} else None
    if a == b == "int":
        return "int"
    return None


class _Frame:
    """One emitted Python function: the module body, a proc or a task body."""

    def __init__(self, kind: str, parent: "_Frame | None"):
        self.kind = kind
        self.parent = parent
        self.scopes: set[int] = set()
        self.nonlocals: list[str] = []

    @property
    def proc_frame(self) -> "_Frame":
        f = self
        while f.kind not in ("module", "proc"):
            f = f.parent
        return f


class _Lowerer:
    def __init__(self, root: Node, t: ProgramSymbolTable):
        self.root = root
        self.t = t
        self.file = root.span.file
        self.diags: list[Diagnostic] = []
        self.types: dict[int, TypeRef | str | None] = {}
        self.emit_names: dict[int, str] = {}
        self.config: list[ConfigConst] = []
        self.frame: _Frame | None = None
        self._assign_names()

    # -- naming -------------------------------------------------------------
    def _assign_names(self):
        taken = set(RUNTIME_NAMES.values()) | _RESERVED | {self.root.attrs.get("name", "")}
        for sid in sorted(self.t.scopes):
            scope = self.t.scopes[sid]
            for sym in scope.symbols.values():
                if sym.decl_span.is_builtin or sym.kind in ("loop-scope", "conditional-scope"):
                    continue
                name = sym.name
                shadowed = scope.parent is not None and \
                    resolve_symbol(self.t, scope.parent, name) is not None
                if shadowed:
                    name = f"{name}_{sym.decl_span.line}"
                if name in taken or name.startswith("_"):
                    name = name + "_"
                self.emit_names[id(sym)] = name

    def emit_name(self, sym: Symbol) -> str:
        if sym.decl_span.is_builtin:
            return sym.name
        return self.emit_names.get(id(sym), sym.name)

    def error(self, msg: str, span: SourceSpan):
        self.diags.append(Diagnostic(msg, span))

    # -- driver -------------------------------------------------------------
    def run(self) -> OutputProgram:
        self.frame = _Frame("module", None)
        self.frame.scopes.add(self.t.root)
        body = self.stmts(self.root.children, self.t.root)
        if self.diags:
            raise CompileError(self.diags)
        prog = OutputProgram(self.root.attrs.get("name", "main"), self.file, body,
                             self.config)
        prog.used_features = reachable_features(body)
        return prog

    def stmts(self, nodes, sid: int) -> list:
        out = []
        for n in nodes:
            lowered = self.stmt(n, sid)
            if lowered is not None:
                out.append(lowered)
        return out

    def scope_of(self, span: SourceSpan) -> int:
        sid = self.t.scope_at(span)
        if sid is None:
            raise ValueError(f"no scope opens at {span}; table and AST disagree")
        return sid

    def with_frame(self, kind: str, fn):
        self.frame = _Frame(kind, self.frame)
        try:
            result = fn()
            return result, self.frame.nonlocals
        finally:
            self.frame = self.frame.parent

    # -- statements ---------------------------------------------------------
    def stmt(self, n: Node, sid: int):
        self.used = []
        k = n.kind
        if k in ("VarDecl", "ConfigConstDecl"):
            return self.decl(n, sid)
        if k == "AssignStmt":
            return self.assign(n, sid)
        if k == "CallExpr":
            return self.call_stmt(n, sid)
        if k == "InlineCxxCall":
            args = [self.expr(a, sid) for a in n.children]
            return OutInline(origin_span=n.span, resolved_symbols=self.take_used(),
                             format=n.attrs["format"], args=args)
        if k in LOOP_KINDS:
            return self.loop(n, sid)
        if k == "ConditionalChain":
            return self.chain(n, sid)
        if k == "BeginStmt":
            inner = self.scope_of(n.span)

            def body():
                self.frame.scopes.add(inner)
                return self.stmts(n.body.children, inner)
            stmts, nonlocals = self.with_frame("begin", body)
            return OutBegin(origin_span=n.span, body=stmts,
                            scope_name=self.t.scopes[inner].scope_name, nonlocals=nonlocals)
        if k == "CobeginStmt":
            return self.cobegin(n, sid)
        if k == "ProcDecl":
            return self.proc(n, sid)
        if k == "ReturnStmt":
            value = self.expr(n.children[0], sid) if n.children else None
            return OutReturn(origin_span=n.span, resolved_symbols=self.take_used(),
                             value=value)
        if k == "YieldStmt":
            value = self.expr(n.children[0], sid)
            return OutYield(origin_span=n.span, resolved_symbols=self.take_used(),
                            value=value)
        if k == "If":
            raise ValueError("lowering expects a normalized AST")
        self.error(f"unsupported feature: {k} statement", n.span)
        return None

    def take_used(self) -> list:
        seen, out = set(), []
        for name, sym in self.used:
            if name not in seen:
                seen.add(name)
                out.append((name, sym))
        self.used = []
        return out

    def binding(self, name: str, sid: int, type_ref=None) -> Binding:
        sym = self.t.scopes[sid].symbols[name]
        self.used.append((name, sym))
        return Binding(name=name, emit=self.emit_name(sym), symbol=sym, type_ref=type_ref)

    def decl(self, n: Node, sid: int) -> OutDecl:
        children = list(n.children)
        type_ref = self.type_ref(children.pop(0), sid) if n.attrs["typed"] else None
        init = self.expr(children.pop(0), sid) if children else None
        target = self.binding(n.attrs["name"], sid, type_ref)
        if type_ref is not None:
            inferred = type_ref.describe()
            self.types[id(target.symbol)] = type_ref
        else:
            inferred = init.type
            self.types[id(target.symbol)] = inferred
        kind = "config" if n.kind == "ConfigConstDecl" else (
            "const" if n.attrs["const"] else "var")
        if kind == "config":
            if type_ref is not None and (type_ref.is_array or type_ref.qualifier):
                self.error("config declarations need a scalar type", n.span)
            self.config.append(ConfigConst(n.attrs["name"], target.emit, inferred,
                                           _source_text(n.children[-1])))
        return OutDecl(origin_span=n.span, resolved_symbols=self.take_used(), target=target,
                       decl_kind=kind, type_ref=type_ref, init=init, inferred=inferred)

    def assign(self, n: Node, sid: int) -> OutAssign:
        target = self.expr(n.children[0], sid)
        value = self.expr(n.children[1], sid)
        op = n.attrs["op"]
        whole = False
        targets = [target]
        if op == "<=>":
            targets.append(value)
        for tgt in targets:
            if isinstance(tgt, Name):
                self.check_store(tgt, n.span)
                if tgt.type and tgt.type.startswith("array["):
                    whole = True
            elif isinstance(tgt, IndexX) and isinstance(tgt.base, Name) and \
                    (tgt.base.symbol.const or tgt.base.symbol.kind == "config-const"):
                self.error(f"cannot assign to an element of const '{tgt.base.name}'", n.span)
            elif not isinstance(tgt, (IndexX, MemberX)):
                self.error("cannot assign to this expression", n.span)
        if whole and op not in ("=", "<=>"):
            self.error(f"unsupported feature: '{op}' on a whole array", n.span)
        return OutAssign(origin_span=n.span, resolved_symbols=self.take_used(), target=target,
                         op=op, value=value, whole_array=whole)

    def check_store(self, target: Name, span: SourceSpan):
        sym = target.symbol
        if sym.decl_span.is_builtin or sym.kind != "variable" and sym.kind != "config-const":
            self.error(f"cannot assign to '{target.name}'", span)
            return
        if sym.const or sym.kind == "config-const":
            self.error(f"cannot assign to const '{target.name}'", span)
            return
        f = self.frame
        if sym.scope in f.scopes:
            return
        if f.kind in ("forall", "coforall") and not (target.type or "").startswith("array["):
            self.error(f"cannot assign to outer variable '{target.name}' inside a "
                       f"{f.kind} body", span)
            return
        if target.emit not in f.nonlocals and not (target.type or "").startswith("array["):
            f.nonlocals.append(target.emit)

    def call_stmt(self, n: Node, sid: int):
        callee = n.children[0]
        if callee.kind == "Identifier" and callee.attrs["name"] == "writeln":
            sym = resolve_symbol(self.t, sid, "writeln")
            if sym is not None and sym.decl_span.is_builtin:
                self.used.append(("writeln", sym))
                args = [self.expr(a, sid) for a in n.children[1:]]
                return OutWriteln(origin_span=n.span, resolved_symbols=self.take_used(),
                                  args=args)
        call = self.expr(n, sid)
        if callee.kind == "MemberExpr":
            return OutExpr(origin_span=n.span, resolved_symbols=self.take_used(), expr=call)
        return OutCall(origin_span=n.span, resolved_symbols=self.take_used(), call=call)

    def loop(self, n: Node, sid: int) -> OutLoop:
        kind = LOOP_KINDS[n.kind]
        iterable = self.expr(n.children[1], sid)
        inner = self.scope_of(n.span)
        index_node = n.children[0]
        tuple_index = index_node.kind == "TupleExpr"
        idents = index_node.children if tuple_index else [index_node]
        index = [self.binding(i.attrs["name"], inner) for i in idents]
        elem = _elem_type(iterable.type)
        for b in index:
            self.types[id(b.symbol)] = elem if not tuple_index else None
        used = self.take_used()

        def body():
            self.frame.scopes.add(inner)
            return self.stmts(n.body.children, inner)
        if kind == "for":
            self.frame.scopes.add(inner)
            stmts = body()
        else:
            stmts, _ = self.with_frame(kind, body)
        cls = {"for": OutFor, "forall": OutForall, "coforall": OutCoforall}[kind]
        return cls(origin_span=n.span, resolved_symbols=used, index=index,
                   tuple_index=tuple_index, iterable=iterable, body=stmts,
                   scope_name=self.t.scopes[inner].scope_name)

    def chain(self, n: Node, sid: int) -> OutCondChain:
        clauses = []
        conds = []
        for cond, _ in n.clauses:
            conds.append(self.expr(cond, sid))
        used = self.take_used()
        for c, (_, body) in zip(conds, n.clauses):
            inner = self.scope_of(body.span)
            self.frame.scopes.add(inner)
            clauses.append((c, self.stmts(body.children, inner), body.span))
        else_body = else_span = None
        if n.else_body is not None:
            inner = self.scope_of(n.else_body.span)
            self.frame.scopes.add(inner)
            else_body = self.stmts(n.else_body.children, inner)
            else_span = n.else_body.span
        return OutCondChain(origin_span=n.span, resolved_symbols=used, clauses=clauses,
                            else_body=else_body, else_span=else_span)

    def cobegin(self, n: Node, sid: int) -> OutCobegin:
        inner = self.scope_of(n.span)
        tasks = []
        for task in n.children:
            if task.kind == "Block":
                tsid = self.scope_of(task.span)

                def body(task=task, tsid=tsid):
                    self.frame.scopes.update((inner, tsid))
                    return self.stmts(task.children, tsid)
            else:
                def body(task=task):
                    self.frame.scopes.add(inner)
                    lowered = self.stmt(task, inner)
                    return [lowered] if lowered is not None else []
            stmts, nonlocals = self.with_frame("cobegin", body)
            tasks.append(CobeginTask(body=stmts, span=task.span, nonlocals=nonlocals))
        self.used = []
        return OutCobegin(origin_span=n.span, tasks=tasks,
                          scope_name=self.t.scopes[inner].scope_name)

    def proc(self, n: Node, sid: int) -> OutProc:
        inner = self.scope_of(n.span)
        target = self.binding(n.attrs["name"], sid)
        params_nodes = [c for c in n.children if c.kind == "Param"]
        ret = self.type_ref(n.children[-2], sid) if n.attrs["has_ret"] else None
        params, variadic = [], None
        for p in params_nodes:
            tref = self.type_ref(p.children[0], sid) if p.attrs["typed"] else None
            b = self.binding(p.attrs["name"], inner, tref)
            self.types[id(b.symbol)] = tref
            if p.attrs["variadic"]:
                if p is not params_nodes[-1]:
                    self.error("only the last parameter may be variadic", p.span)
                variadic = b.emit
            params.append(b)
        self.types[id(target.symbol)] = ret
        used = self.take_used()

        def body():
            self.frame.scopes.add(inner)
            return self.stmts(n.body.children, inner)
        stmts, nonlocals = self.with_frame("proc", body)
        return OutProc(origin_span=n.span, resolved_symbols=used, target=target,
                       params=params, variadic=variadic, ret=ret, body=stmts,
                       is_iter=n.attrs["proc_kind"] == "iter", nonlocals=nonlocals)

    # -- types --------------------------------------------------------------
    def type_ref(self, n: Node, sid: int) -> TypeRef:
        if n.kind == "ArrayType":
            dims = [self.expr(d, sid) for d in n.children[:-1]]
            elem = self.type_ref(n.children[-1], sid)
            if elem.is_array:
                self.error("unsupported feature: arrays of arrays", n.span)
            if elem.qualifier in ("sync", "single"):
                self.error(f"unsupported feature: arrays of {elem.qualifier} variables", n.span)
            if elem.qualifier == "atomic" and elem.name != "int":
                self.error("unsupported feature: atomic arrays hold int only", n.span)
            return TypeRef(name="array", dims=dims, elem=elem)
        q = n.attrs.get("qualifier")
        if q == "atomic" and n.attrs["name"] not in ("int", "bool"):
            self.error("atomic variables hold int or bool", n.span)
        return TypeRef(name=n.attrs["name"], qualifier=q)

    # -- expressions --------------------------------------------------------
    def expr(self, n: Node, sid: int) -> Expr:
        e = self._expr(n, sid)
        e.parens = n.attrs.get("parens", 0)
        return e

    def _expr(self, n: Node, sid: int) -> Expr:
        k, c, span = n.kind, n.children, n.span
        if k == "Identifier":
            return self.name(n, sid)
        if k == "Literal":
            return Lit(span=span, type=n.attrs["type"], value=n.attrs["value"],
                       text=n.attrs["text"])
        if k == "BinaryExpr":
            op = n.attrs["op"]
            lhs, rhs = self.expr(c[0], sid), self.expr(c[1], sid)
            return BinOp(span=span, op=op, lhs=lhs, rhs=rhs,
                         type=_binary_type(op, lhs.type, rhs.type))
        if k == "UnaryExpr":
            operand = self.expr(c[0], sid)
            t = "bool" if n.attrs["op"] == "!" else operand.type
            return UnOp(span=span, op=n.attrs["op"], operand=operand, type=t)
        if k == "TernaryExpr":
            cond, a, b = (self.expr(x, sid) for x in c)
            t = a.type if a.type == b.type else _arith(a.type, b.type)
            return Cond(span=span, cond=cond, then=a, other=b, type=t)
        if k == "RangeLiteral":
            parts = [self.expr(x, sid) for x in c]
            low = parts.pop(0) if n.attrs["has_low"] else None
            high = parts.pop(0) if n.attrs["has_high"] else None
            if n.attrs["counted"] and low is None:
                self.error("a counted range needs a low bound", span)
            return RangeX(span=span, low=low, high=high, counted=n.attrs["counted"],
                          type="range")
        if k == "TupleExpr":
            return TupleX(span=span, elems=[self.expr(x, sid) for x in c], type="tuple")
        if k == "DomainLiteral":
            return DomainX(span=span, dims=[self.expr(x, sid) for x in c], type="domain")
        if k == "IndexExpr":
            base = self.expr(c[0], sid)
            index = [self.expr(x, sid) for x in c[1:]]
            return IndexX(span=span, base=base, index=index, type=_elem_type(base.type))
        if k == "MemberExpr":
            base = self.expr(c[0], sid)
            member = n.attrs["member"]
            t = "int" if member in ("size", "rank", "id", "maxTaskPar", "numPUs") else None
            if base.type == "range" and member in ("low", "high", "first", "last", "stride"):
                t = "int"
            return MemberX(span=span, base=base, member=member, type=t)
        if k == "CallExpr":
            return self.call(n, sid)
        if k == "InlineCxxCall":
            self.error("inlinecxx is a statement, not an expression", span)
            return Lit(span=span, value=None, text="None")
        self.error(f"unsupported feature: {k} expression", span)
        return Lit(span=span, value=None, text="None")

    def name(self, n: Node, sid: int) -> Name:
        name = n.attrs["name"]
        sym = resolve_symbol(self.t, sid, name)
        if sym is None:
            self.error(f"unresolved identifier '{name}'", n.span)
            sym = Symbol(name, "variable", None, n.span)
        elif sym.kind in ("loop-scope", "conditional-scope", "builtin-operator",
                          "builtin-template"):
            self.error(f"'{name}' does not name a value", n.span)
        elif not sym.decl_span.is_builtin and sym.kind in ("variable", "config-const") \
                and sym.decl_span.file == n.span.file \
                and (sym.decl_span.line, sym.decl_span.column) > (n.span.line, n.span.column) \
                and self._same_function(sym):
            self.error(f"'{name}' is used before its declaration", n.span)
        self.used.append((name, sym))
        t = self.types.get(id(sym))
        if isinstance(t, TypeRef):
            t = t.describe()
        if sym.decl_span.is_builtin and sym.kind == "builtin-type":
            t = "type"
        return Name(span=n.span, name=name, emit=self.emit_name(sym), symbol=sym, type=t)

    def _same_function(self, sym: Symbol) -> bool:
        return sym.scope in self.frame.proc_frame.scopes or sym.scope in self.frame.scopes

    def call(self, n: Node, sid: int) -> CallX:
        callee = self.expr(n.children[0], sid)
        args = [self.expr(a, sid) for a in n.children[1:]]
        t = None
        if isinstance(callee, Name):
            sym = callee.symbol
            if sym.decl_span.is_builtin:
                if sym.name == "writeln":
                    self.error("writeln is a statement, not an expression", n.span)
                elif sym.name == "sqrt":
                    t = "real"
                elif sym.name in ("abs", "min", "max") and args:
                    t = args[0].type
                    for a in args[1:]:
                        t = t if a.type == t else _arith(t, a.type)
                elif sym.name in BUILTIN_TYPES:
                    t = sym.name
            elif sym.kind == "function":
                ret = self.types.get(id(sym))
                t = ret.describe() if isinstance(ret, TypeRef) else None
            elif sym.kind in ("variable", "config-const"):
                self.error(f"'{callee.name}' is not a procedure", n.span)
        elif isinstance(callee, MemberX):
            bt = callee.base.type or ""
            if callee.member in ("read", "fetchAdd", "fetchSub", "fetchXor", "fetchAnd",
                                 "fetchOr", "exchange", "readFE", "readFF"):
                t = bt.split(" ", 1)[1] if " " in bt else None
            elif callee.member in ("compareExchange", "testAndSet"):
                t = "bool"
        return CallX(span=n.span, callee=callee, args=args, type=t)


def _binary_type(op: str, a: str | None, b: str | None) -> str | None:
    if op in _COMPARISONS or op in ("&&", "||"):
        return "bool"
    if op in ("by", "#", "align"):
        return a
    if op in ("&", "|", "^", "<<", ">>"):
        return "int" if a == b == "int" else ("bool" if a == b == "bool" else None)
    if op == "+" and a == b == "string":
        return "string"
    if op == "**" and a == b == "int":
        return "int"
    return _arith(a, b)


def _elem_type(t: str | None) -> str | None:
    if t is None:
        return None
    if t.startswith("array[") and t.endswith("]"):
        return t[6:-1]
    if t in ("range", "domain"):
        return "int"
    return None


def _source_text(n: Node) -> str:
    from .frontend.unparse import unparse_expr
    return unparse_expr(n)


def lower_program(root: Node, t: ProgramSymbolTable) -> OutputProgram:
    """Lower a normalized Module plus its symbol table.

    Raises :class:`CompileError` for unresolved identifiers, assignments to
    constants, uses before declaration and unsupported constructs.
    """
    if root.kind != "Module":
        raise ValueError("expected a Module node")
    return _Lowerer(root, t).run()
