"""Print an AST back to Chapel source."""

from __future__ import annotations

from .ast import Node

_LOOP_KW = {"ForLoop": "for", "ForallLoop": "forall", "CoforallLoop": "coforall"}


def unparse(node: Node, indent: str = "  ") -> str:
    lines: list[str] = []
    _Printer(lines, indent).stmts(node.children if node.kind == "Module" else [node], 0)
    return "\n".join(lines) + ("\n" if lines else "")


def unparse_expr(e: Node) -> str:
    text = _expr(e)
    return "(" * e.attrs.get("parens", 0) + text + ")" * e.attrs.get("parens", 0)


def _expr(e: Node) -> str:
    k = e.kind
    c = e.children
    if k == "Identifier":
        return e.attrs["name"]
    if k == "Literal":
        return e.attrs["text"]
    if k == "BinaryExpr":
        return f"{unparse_expr(c[0])} {e.attrs['op']} {unparse_expr(c[1])}"
    if k == "UnaryExpr":
        return e.attrs["op"] + unparse_expr(c[0])
    if k == "TernaryExpr":
        return (f"if {unparse_expr(c[0])} then {unparse_expr(c[1])} "
                f"else {unparse_expr(c[2])}")
    if k == "RangeLiteral":
        parts = list(c)
        low = unparse_expr(parts.pop(0)) if e.attrs["has_low"] else ""
        high = unparse_expr(parts.pop(0)) if e.attrs["has_high"] else ""
        return f"{low}..{'#' if e.attrs['counted'] else ''}{high}"
    if k == "TupleExpr":
        inner = ", ".join(unparse_expr(x) for x in c)
        return f"({inner}{',' if e.attrs.get('trailing_comma') else ''})"
    if k == "DomainLiteral":
        return "{" + ", ".join(unparse_expr(x) for x in c) + "}"
    if k == "IndexExpr":
        return f"{unparse_expr(c[0])}[{', '.join(unparse_expr(x) for x in c[1:])}]"
    if k == "MemberExpr":
        return f"{unparse_expr(c[0])}.{e.attrs['member']}"
    if k == "CallExpr":
        return f"{unparse_expr(c[0])}({', '.join(unparse_expr(x) for x in c[1:])})"
    if k == "TypeExpr":
        text = e.attrs["name"]
        if e.attrs.get("width"):
            text += f"({e.attrs['width']})"
        return f"{e.attrs['qualifier']} {text}" if e.attrs.get("qualifier") else text
    if k == "ArrayType":
        return f"[{', '.join(unparse_expr(x) for x in c[:-1])}] {unparse_expr(c[-1])}"
    raise ValueError(f"not an expression: {k}")


class _Printer:
    def __init__(self, lines, indent):
        self.lines = lines
        self.ind = indent

    def emit(self, depth, text):
        self.lines.append(self.ind * depth + text)

    def stmts(self, nodes, depth):
        for s in nodes:
            self.stmt(s, depth)

    def block(self, head, body: Node, depth, tail=""):
        self.emit(depth, head + " {")
        self.stmts(body.children, depth + 1)
        self.emit(depth, "}" + tail)

    def stmt(self, s: Node, depth):
        k, c, a = s.kind, s.children, s.attrs
        if k in ("VarDecl", "ConfigConstDecl"):
            text = ("config " if k == "ConfigConstDecl" else "")
            text += ("const " if a["const"] else "var ") + a["name"]
            rest = list(c)
            if a["typed"]:
                text += " : " + unparse_expr(rest.pop(0))
            if a.get("has_init", True) and rest:
                text += " = " + unparse_expr(rest.pop(0))
            self.emit(depth, text + ";")
        elif k == "ProcDecl":
            params, rest = [], list(c[:-1])
            ret = rest.pop() if a["has_ret"] else None
            for p in rest:
                ptxt = p.attrs["name"]
                if p.attrs["typed"]:
                    ptxt += ": " + unparse_expr(p.children[0])
                elif p.attrs["generic"] is not None:
                    ptxt += ": ?" + p.attrs["generic"]
                if p.attrs["variadic"]:
                    ptxt += "..."
                params.append(ptxt)
            head = f"{a['proc_kind']} {a['name']}({', '.join(params)})"
            if ret is not None:
                head += ": " + unparse_expr(ret)
            self.block(head, c[-1], depth)
        elif k == "ConditionalChain":
            for i, (cond, body) in enumerate(s.clauses):
                opener = "if " if i == 0 else "} else if "
                self.emit(depth, f"{opener}{unparse_expr(cond)} {{")
                self.stmts(body.children, depth + 1)
            if s.else_body is not None:
                self.emit(depth, "} else {")
                self.stmts(s.else_body.children, depth + 1)
            self.emit(depth, "}")
        elif k == "If":
            node, opener = s, "if "
            while True:
                self.emit(depth, f"{opener}{unparse_expr(node.children[0])} {{")
                self.stmts(node.children[1].children, depth + 1)
                tail = node.children[2] if len(node.children) > 2 else None
                if tail is not None and tail.attrs.get("synthetic"):
                    node, opener = tail.children[0].children[0], "} else if "
                    continue
                if tail is not None:
                    self.emit(depth, "} else {")
                    self.stmts(tail.children, depth + 1)
                break
            self.emit(depth, "}")
        elif k in _LOOP_KW:
            self.block(f"{_LOOP_KW[k]} {unparse_expr(c[0])} in {unparse_expr(c[1])}",
                       c[2], depth)
        elif k == "BeginStmt":
            body = c[0]
            if body.attrs.get("braces") is False:
                inner: list[str] = []
                _Printer(inner, self.ind).stmt(body.children[0], 0)
                self.emit(depth, "begin " + inner[0])
                self.lines.extend(self.ind * depth + line for line in inner[1:])
            else:
                self.block("begin", body, depth)
        elif k == "CobeginStmt":
            self.emit(depth, "cobegin {")
            for task in c:
                self.stmt(task, depth + 1)
            self.emit(depth, "}")
        elif k == "Block":
            self.emit(depth, "{")
            self.stmts(s.children, depth + 1)
            self.emit(depth, "}")
        elif k == "AssignStmt":
            self.emit(depth, f"{unparse_expr(c[0])} {a['op']} {unparse_expr(c[1])};")
        elif k == "CallExpr":
            self.emit(depth, unparse_expr(s) + ";")
        elif k == "InlineCxxCall":
            args = [a["format_text"]] + [unparse_expr(x) for x in c]
            self.emit(depth, f"inlinecxx({', '.join(args)});")
        elif k == "ReturnStmt":
            self.emit(depth, "return" + (" " + unparse_expr(c[0]) if c else "") + ";")
        elif k == "YieldStmt":
            self.emit(depth, f"yield {unparse_expr(c[0])};")
        else:
            raise ValueError(f"not a statement: {k}")
