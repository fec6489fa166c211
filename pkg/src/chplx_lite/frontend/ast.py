"""Parse-tree nodes.

A single node class carries a ``kind`` tag, ordered children, a source span
and a small dict of kind-specific attributes.  Child layout per kind:

=================  ==========================================================
Module             statements
VarDecl            [type?, init?]        attrs: name, const, typed, has_init
ConfigConstDecl    [type?, init]         attrs: name, const, typed
ProcDecl           [Param..., ret?, Block]  attrs: name, proc_kind, has_ret
Param              [type?]               attrs: name, typed, generic, variadic
Block              statements            attrs: synthetic (wrapper from nesting)
If                 [cond, then, tail?]   tail is an else Block or a synthetic
                                         wrapper holding the next If
ConditionalChain   [cond1, body1, ..., condN, bodyN, else?]  attrs: has_else
ForLoop etc.       [index, iterable, Block]
BeginStmt          [Block]
CobeginStmt        statements (each one a task)
AssignStmt         [target, value]       attrs: op
CallExpr           [callee, args...]
InlineCxxCall      [args...]             attrs: format
ReturnStmt         [value?]
YieldStmt          [value]
BinaryExpr         [lhs, rhs]            attrs: op
UnaryExpr          [operand]             attrs: op
TernaryExpr        [cond, then, else]
RangeLiteral       [low?, high?]         attrs: counted, has_low, has_high
TupleExpr          elements
DomainLiteral      ranges
IndexExpr          [base, index...]
MemberExpr         [base]                attrs: member
Literal            -                     attrs: value, type, text
Identifier         -                     attrs: name
TypeExpr           -                     attrs: name, qualifier
ArrayType          [dims..., TypeExpr]
=================  ==========================================================

Expressions may carry ``attrs["parens"]``: how many source parentheses
wrapped them, kept so the tree prints back to the same tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..diagnostics import SourceSpan

STATEMENT_KINDS = frozenset({
    "VarDecl", "ConfigConstDecl", "ProcDecl", "If", "ConditionalChain",
    "ForLoop", "ForallLoop", "CoforallLoop", "BeginStmt", "CobeginStmt",
    "CallExpr", "InlineCxxCall", "AssignStmt", "ReturnStmt", "YieldStmt",
    "Block",
})

LOOP_KINDS = {"ForLoop": "for", "ForallLoop": "forall", "CoforallLoop": "coforall"}


@dataclass
class Node:
    kind: str
    children: list["Node"] = field(default_factory=list)
    span: SourceSpan | None = None
    attrs: dict = field(default_factory=dict)

    def walk(self) -> Iterator["Node"]:
        """Pre-order traversal including self."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def structure(self):
        """Hashable summary used for structural equality in tests."""
        attrs = tuple(sorted((k, repr(v)) for k, v in self.attrs.items()))
        return (self.kind, self.span, attrs, tuple(c.structure() for c in self.children))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "span": self.span.to_json() if self.span else None,
            "attrs": dict(self.attrs),
            "children": [c.to_json() for c in self.children],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Node":
        span = SourceSpan(**data["span"]) if data.get("span") else None
        return cls(data["kind"], [cls.from_json(c) for c in data["children"]],
                   span, dict(data["attrs"]))

    # convenience accessors for the normalized conditional form
    @property
    def clauses(self) -> list[tuple["Node", "Node"]]:
        assert self.kind == "ConditionalChain"
        n = len(self.children) - (1 if self.attrs.get("has_else") else 0)
        return [(self.children[i], self.children[i + 1]) for i in range(0, n, 2)]

    @property
    def else_body(self) -> "Node | None":
        assert self.kind == "ConditionalChain"
        return self.children[-1] if self.attrs.get("has_else") else None

    @property
    def body(self) -> "Node":
        """Trailing Block of loops, procs and begin statements."""
        return self.children[-1]

    def __repr__(self):
        label = self.attrs.get("name") or self.attrs.get("op") or self.attrs.get("value", "")
        return f"{self.kind}({label!r}, {len(self.children)} children)"


def is_statement(node: Node) -> bool:
    return node.kind in STATEMENT_KINDS
