"""Flatten nested if/else-if/else chains into ConditionalChain nodes."""

from __future__ import annotations

from .ast import Node


def _is_else_if_wrapper(tail: Node) -> bool:
    # the parser marks exactly the two wrapper levels it introduced
    if tail.kind != "Block" or not tail.attrs.get("synthetic"):
        return False
    if len(tail.children) != 1:
        return False
    inner = tail.children[0]
    return (inner.kind == "Block" and inner.attrs.get("synthetic")
            and len(inner.children) == 1 and inner.children[0].kind == "If")


def _flatten(node: Node) -> Node:
    children = []
    cur = node
    while True:
        cond, then = cur.children[0], cur.children[1]
        children += [normalize_conditionals(cond), normalize_conditionals(then)]
        if len(cur.children) < 3:
            has_else = False
            break
        tail = cur.children[2]
        if _is_else_if_wrapper(tail):
            cur = tail.children[0].children[0]
            continue
        children.append(normalize_conditionals(tail))
        has_else = True
        break
    return Node("ConditionalChain", children, node.span, {"has_else": has_else})


def normalize_conditionals(root: Node) -> Node:
    """Return a copy of *root* with every If chain replaced by one ConditionalChain.

    Clause order follows source order and the wrapper blocks created by the
    nesting are dropped.  Already-normalized trees come back unchanged.
    """
    if root.kind == "If":
        return _flatten(root)
    return Node(root.kind, [normalize_conditionals(c) for c in root.children],
                root.span, dict(root.attrs))


def count_conditions(root: Node) -> int:
    """Number of conditions in either form, for clause-count checks."""
    total = 0
    for n in root.walk():
        if n.kind == "If":
            total += 1
        elif n.kind == "ConditionalChain":
            total += len(n.clauses)
    return total
