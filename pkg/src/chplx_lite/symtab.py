"""Pass 1: the program symbol table.

The program table is a tree of per-scope tables.  Each scope is keyed by the
source line (and column) of the construct that opens it, so later passes can
find "the scope that starts at heat.chpl:12" without carrying pointers around.
Loops and conditional clauses get generated names such as ``forall_heat_12``
or ``else_if_heat_30``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .diagnostics import CompileError, Diagnostic, SourceSpan
from .frontend.ast import LOOP_KINDS, Node
from .frontend.unparse import unparse_expr

BUILTIN_TYPES = ("nil", "bool", "string", "int", "real", "complex", "tuple", "range",
                 "domain", "function")
TEMPLATE_SYMBOL = "?"
BUILTIN_OPERATORS = (
    "+", "-", "*", "/", "%", "**", "&", "|", "^", "~", "<<", ">>", "==", "!=", "<",
    "<=", ">", ">=", "&&", "||", "!", "..", "#", "by", "align", "<=>",
)
TERNARY_OPERATOR = "?:"
BUILTIN_FUNCTIONS = ("inlinecxx", "writeln", "zip", "min", "max", "abs", "sqrt")
BUILTIN_VALUES = ("here",)

SCOPE_KINDS = ("module", "proc", "for", "forall", "coforall", "if", "else_if", "else",
               "begin", "cobegin", "block")


@dataclass
class Symbol:
    name: str
    kind: str
    declared_type: str | None
    decl_span: SourceSpan
    const: bool = False
    scope: int = 0
    # declaration node, used by later passes for initializer/type inspection
    node: Node | None = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, "declaredType": self.declared_type,
                "declSpan": self.decl_span.to_json(), "const": self.const}


@dataclass
class ScopeSymbolTable:
    id: int
    kind: str
    scope_name: str
    opening_span: SourceSpan
    parent: int | None
    children: list[int] = field(default_factory=list)
    symbols: dict[str, Symbol] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "id": self.id, "kind": self.kind, "scopeName": self.scope_name,
            "openingSpan": self.opening_span.to_json(), "parent": self.parent,
            "children": list(self.children),
            "symbols": {n: s.to_json() for n, s in self.symbols.items()},
        }


@dataclass
class ProgramSymbolTable:
    scopes: dict[int, ScopeSymbolTable]
    line_index: dict[tuple[str, int], int]
    column_index: dict[tuple[str, int, int], int]
    root: int = 0

    def scope(self, sid: int) -> ScopeSymbolTable:
        return self.scopes[sid]

    def scope_at(self, span: SourceSpan) -> int | None:
        """Scope opened exactly at *span* (line and column)."""
        return self.column_index.get((span.file, span.line, span.column))

    def ancestors(self, sid: int):
        while sid is not None:
            yield sid
            sid = self.scopes[sid].parent

    def to_json(self) -> dict:
        return {"root": self.root,
                "scopes": [self.scopes[i].to_json() for i in sorted(self.scopes)]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def lookup_scope_by_line(t: ProgramSymbolTable, file: str, line: int) -> int | None:
    """Scope opened at (*file*, *line*); the outermost one when several share it."""
    return t.line_index.get((file, line))


def resolve_symbol(t: ProgramSymbolTable, scope: int, name: str) -> Symbol | None:
    """Search *scope* and then its ancestors; siblings and children are never searched."""
    if scope not in t.scopes:
        raise KeyError(f"no scope with id {scope}")
    for sid in t.ancestors(scope):
        sym = t.scopes[sid].symbols.get(name)
        if sym is not None:
            return sym
    return None


def enumerate_descendants(t: ProgramSymbolTable, scope: int) -> list[int]:
    out, stack = [], [scope]
    while stack:
        sid = stack.pop()
        out.append(sid)
        stack.extend(reversed(t.scopes[sid].children))
    return out


def type_name(node: Node | None) -> str | None:
    return None if node is None else unparse_expr(node)


class _Builder:
    def __init__(self, module: Node):
        self.module = module
        self.file = module.span.file
        self.stem = module.attrs.get("name", "main")
        self.scopes: dict[int, ScopeSymbolTable] = {}
        self.line_index: dict[tuple[str, int], int] = {}
        self.column_index: dict[tuple[str, int, int], int] = {}
        self.diags: list[Diagnostic] = []

    def open(self, kind: str, name: str, span: SourceSpan, parent: int | None) -> int:
        sid = len(self.scopes)
        self.scopes[sid] = ScopeSymbolTable(sid, kind, name, span, parent)
        if parent is not None:
            self.scopes[parent].children.append(sid)
        self.line_index.setdefault((span.file, span.line), sid)
        if parent is not None:
            # the module's span is 1:1, which a first statement can share
            self.column_index.setdefault((span.file, span.line, span.column), sid)
        return sid

    def declare(self, sid: int, sym: Symbol):
        table = self.scopes[sid].symbols
        sym.scope = sid
        prev = table.get(sym.name)
        if prev is not None:
            if sym.kind in ("loop-scope", "conditional-scope"):
                # two same-kind constructs on one line produce one name
                sym.name = f"{sym.name}_{sym.decl_span.column}"
                table[sym.name] = sym
                return
            related = [] if prev.decl_span.is_builtin else [prev.decl_span]
            self.diags.append(Diagnostic(
                f"duplicate declaration of '{sym.name}' in this scope", sym.decl_span,
                related=related))
            return
        table[sym.name] = sym

    def scoped_name(self, kind: str, span: SourceSpan) -> str:
        return f"{kind}_{self.stem}_{span.line}"

    def build(self) -> ProgramSymbolTable:
        root = self.open("module", self.stem, self.module.span, None)
        self.load_builtins(root)
        self.stmts(self.module.children, root)
        if self.diags:
            raise CompileError(self.diags)
        return ProgramSymbolTable(self.scopes, self.line_index, self.column_index, root)

    def load_builtins(self, sid: int):
        b = SourceSpan.builtin()
        for name in BUILTIN_TYPES:
            self.declare(sid, Symbol(name, "builtin-type", None, b))
        self.declare(sid, Symbol(TEMPLATE_SYMBOL, "builtin-template", None, b))
        for op in BUILTIN_OPERATORS + (TERNARY_OPERATOR,):
            self.declare(sid, Symbol(op, "builtin-operator", None, b))
        for fn in BUILTIN_FUNCTIONS:
            self.declare(sid, Symbol(fn, "function", "function", b))
        for name in BUILTIN_VALUES:
            self.declare(sid, Symbol(name, "variable", "locale", b, const=True))

    def stmts(self, nodes, sid):
        for n in nodes:
            self.stmt(n, sid)

    def stmt(self, n: Node, sid: int):
        k = n.kind
        if k in ("VarDecl", "ConfigConstDecl"):
            tnode = n.children[0] if n.attrs["typed"] else None
            kind = "config-const" if k == "ConfigConstDecl" else "variable"
            self.declare(sid, Symbol(n.attrs["name"], kind, type_name(tnode), n.span,
                                     const=n.attrs["const"], node=n))
        elif k == "ProcDecl":
            ret = n.children[-2] if n.attrs["has_ret"] else None
            self.declare(sid, Symbol(n.attrs["name"], "function", type_name(ret), n.span,
                                     node=n))
            inner = self.open("proc", n.attrs["name"], n.span, sid)
            for p in n.children[:-1]:
                if p.kind == "Param":
                    ptype = type_name(p.children[0]) if p.attrs["typed"] else None
                    self.declare(inner, Symbol(p.attrs["name"], "variable", ptype, p.span,
                                               const=True, node=p))
            self.stmts(n.body.children, inner)
        elif k in LOOP_KINDS:
            name = self.scoped_name(LOOP_KINDS[k], n.span)
            self.declare(sid, Symbol(name, "loop-scope", None, n.span, node=n))
            inner = self.open(LOOP_KINDS[k], name, n.span, sid)
            index = n.children[0]
            idents = index.children if index.kind == "TupleExpr" else [index]
            for ident in idents:
                self.declare(inner, Symbol(ident.attrs["name"], "variable", None, ident.span,
                                           const=True, node=n))
            self.stmts(n.body.children, inner)
        elif k == "ConditionalChain":
            for i, (_cond, body) in enumerate(n.clauses):
                self.clause("if" if i == 0 else "else_if", body, sid)
            if n.else_body is not None:
                self.clause("else", n.else_body, sid)
        elif k == "If":
            raise ValueError("symbol table construction expects a normalized AST")
        elif k == "BeginStmt":
            inner = self.open("begin", self.scoped_name("begin", n.span), n.span, sid)
            self.stmts(n.body.children, inner)
        elif k == "CobeginStmt":
            inner = self.open("cobegin", self.scoped_name("cobegin", n.span), n.span, sid)
            for task in n.children:
                self.stmt(task, inner)
        elif k == "Block":
            inner = self.open("block", self.scoped_name("block", n.span), n.span, sid)
            self.stmts(n.children, inner)

    def clause(self, kind: str, body: Node, sid: int):
        name = self.scoped_name(kind, body.span)
        self.declare(sid, Symbol(name, "conditional-scope", None, body.span, node=body))
        inner = self.open(kind, name, body.span, sid)
        self.stmts(body.children, inner)


def build_program_symbol_table(root: Node) -> ProgramSymbolTable:
    """Visit a normalized Module AST and build its scope tree.

    Raises :class:`CompileError` listing every duplicate declaration.
    """
    if root.kind != "Module":
        raise ValueError("expected a Module node")
    return _Builder(root).build()


SCOPE_OPENING_KINDS = frozenset(
    {"ProcDecl", "ForLoop", "ForallLoop", "CoforallLoop", "BeginStmt", "CobeginStmt"})


def expected_scope_count(root: Node) -> int:
    """1 + scope-opening constructs, computed straight from the AST."""
    total = 1
    for n in root.walk():
        if n.kind in SCOPE_OPENING_KINDS:
            total += 1
        if n.kind == "ConditionalChain":
            total += len(n.clauses) + (1 if n.else_body is not None else 0)
        elif n.kind == "CobeginStmt":
            total += sum(1 for t in n.children if t.kind == "Block")
    return total
