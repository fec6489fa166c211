"""Recursive-descent parser producing the nested-conditional AST.

Chained ``else if`` clauses are deliberately nested the way the reference
Chapel frontend stores them: each later conditional sits inside two wrapper
blocks hanging off the previous conditional, and a final ``else`` is attached
as a plain block.  :func:`~chplx_lite.frontend.normalize.normalize_conditionals`
flattens that shape afterwards.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, ParseError, SourceSpan
from .ast import Node
from .lexer import Token, TokenKind

K = TokenKind

TYPE_NAMES = frozenset({
    "nil", "bool", "string", "int", "real", "complex", "tuple", "range", "domain",
})
TYPE_QUALIFIERS = ("atomic", "sync", "single")

ASSIGN_OPS = frozenset({
    "=", "+=", "-=", "*=", "/=", "%=", "**=", "&=", "|=", "^=", "<<=", ">>=", "<=>",
})

# binding strength, higher binds tighter; mirrors Chapel's operator table
BINARY_PREC = {
    "||": 1, "&&": 2, "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "by": 5, "#": 5, "align": 5,
    "..": 6,
    "+": 7, "-": 7,
    "|": 8, "^": 9, "&": 10, "<<": 11, ">>": 11,
    "*": 13, "/": 13, "%": 13,
    "**": 15,
}
RIGHT_ASSOC = frozenset({"**"})
PREFIX_PREC = {"+": 12, "-": 12, "!": 14, "~": 14}


class Parser:
    def __init__(self, tokens: list[Token]):
        if not tokens or tokens[-1].kind is not K.EOF:
            raise ValueError("token list must end with eof")
        self.toks = tokens
        self.i = 0
        self.file = tokens[-1].span.file

    # -- token helpers -------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.text == text and t.kind in (K.KEYWORD, K.OPERATOR, K.PUNCTUATION)

    def advance(self) -> Token:
        t = self.tok
        if t.kind is not K.EOF:
            self.i += 1
        return t

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, *texts: str) -> Token:
        for text in texts:
            if self.at(text):
                return self.advance()
        self.error(f"unexpected {self.describe(self.tok)}", expected=texts)

    def expect_ident(self) -> Token:
        if self.tok.kind is K.IDENTIFIER:
            return self.advance()
        self.error(f"unexpected {self.describe(self.tok)}", expected=("identifier",))

    def error(self, message, span: SourceSpan | None = None, expected=()):
        raise ParseError(Diagnostic(message, span or self.tok.span, expected=tuple(expected)))

    @staticmethod
    def describe(t: Token) -> str:
        return "end of file" if t.kind is K.EOF else f"{t.kind.value} {t.text!r}"

    # -- statements ----------------------------------------------------
    def parse_module(self) -> Node:
        span = SourceSpan(self.file, 1, 1)
        stmts = []
        while self.tok.kind is not K.EOF:
            stmts.append(self.statement())
        return Node("Module", stmts, span, {"name": _module_name(self.file)})

    def statement(self) -> Node:
        t = self.tok
        if t.kind is K.KEYWORD:
            handler = {
                "var": self.var_decl, "const": self.var_decl, "config": self.config_decl,
                "proc": self.proc_decl, "iter": self.proc_decl, "if": self.if_stmt,
                "for": self.loop, "forall": self.loop, "coforall": self.loop,
                "begin": self.begin_stmt, "cobegin": self.cobegin_stmt,
                "return": self.return_stmt, "yield": self.yield_stmt,
            }.get(t.text)
            if handler:
                return handler()
        if self.at("{"):
            self.error("bare blocks are only supported as cobegin tasks")
        if self.at(";"):
            self.error("empty statement", expected=("statement",))
        return self.expr_statement()

    def var_decl(self, config_span: SourceSpan | None = None) -> Node:
        kw = self.expect("var", "const")
        name = self.expect_ident()
        children, typed, has_init = [], False, False
        if self.accept(":"):
            children.append(self.type_expr())
            typed = True
        if self.accept("="):
            children.append(self.expr())
            has_init = True
        self.expect(";")
        attrs = {"name": name.text, "const": kw.text == "const", "typed": typed,
                 "has_init": has_init}
        if config_span is not None:
            if not has_init:
                self.error("config declarations need a default value", name.span)
            return Node("ConfigConstDecl", children, config_span, attrs)
        if not typed and not has_init:
            self.error(f"declaration of '{name.text}' needs a type or an initializer",
                       name.span)
        return Node("VarDecl", children, kw.span, attrs)

    def config_decl(self) -> Node:
        kw = self.expect("config")
        return self.var_decl(config_span=kw.span)

    def proc_decl(self) -> Node:
        kw = self.expect("proc", "iter")
        name = self.expect_ident()
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                params.append(self.param())
                if not self.accept(","):
                    break
        self.expect(")")
        children = list(params)
        has_ret = False
        if self.accept(":"):
            children.append(self.type_expr())
            has_ret = True
        children.append(self.block())
        return Node("ProcDecl", children, kw.span,
                    {"name": name.text, "proc_kind": kw.text, "has_ret": has_ret})

    def param(self) -> Node:
        name = self.expect_ident()
        attrs = {"name": name.text, "typed": False, "generic": None, "variadic": False}
        children = []
        if self.accept(":"):
            if self.at("?"):
                self.advance()
                attrs["generic"] = self.advance().text if self.tok.kind is K.IDENTIFIER else ""
            else:
                children.append(self.type_expr())
                attrs["typed"] = True
        elif self.at("?"):
            # `n?...` form used by the inlinecxx prototype
            self.advance()
            attrs["generic"] = ""
        if self.accept("..."):
            attrs["variadic"] = True
        return Node("Param", children, name.span, attrs)

    def type_expr(self) -> Node:
        t = self.tok
        if self.at("["):
            self.advance()
            dims = [self.expr()]
            while self.accept(","):
                dims.append(self.expr())
            self.expect("]")
            elem = self.type_expr()
            return Node("ArrayType", dims + [elem], t.span)
        qualifier = None
        if t.kind is K.KEYWORD and t.text in TYPE_QUALIFIERS:
            qualifier = self.advance().text
        name = self.tok
        if name.kind is not K.IDENTIFIER:
            self.error(f"unexpected {self.describe(name)}", expected=sorted(TYPE_NAMES))
        if name.text not in TYPE_NAMES:
            self.error(f"unsupported type annotation '{name.text}'", name.span,
                       expected=sorted(TYPE_NAMES))
        self.advance()
        width = None
        if self.at("(") and self.peek().kind is K.INTEGER:
            self.advance()
            width = self.advance().value
            self.expect(")")
            if width != 64 or name.text not in ("int", "real"):
                self.error(f"only 64-bit '{name.text}' is supported", name.span)
        return Node("TypeExpr", [], t.span,
                    {"name": name.text, "qualifier": qualifier, "width": width})

    def block(self, span: SourceSpan | None = None) -> Node:
        lb = self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind is K.EOF:
                self.error("unexpected end of file", expected=("}",))
            stmts.append(self.statement())
        self.expect("}")
        return Node("Block", stmts, span or lb.span, {"synthetic": False})

    def body(self, intro: str, span: SourceSpan | None = None) -> Node:
        """A braced block, or ``<intro> statement`` wrapped in a block."""
        if self.accept(intro) and not self.at("{"):
            stmt = self.statement()
            return Node("Block", [stmt], span or stmt.span, {"synthetic": False})
        return self.block(span=span)

    def if_stmt(self, else_span: SourceSpan | None = None) -> Node:
        kw = self.expect("if")
        head = else_span or kw.span
        cond = self.expr()
        then = self.body("then", span=head)
        children = [cond, then]
        if self.at("else"):
            else_tok = self.advance()
            if self.at("if"):
                nested = self.if_stmt(else_span=else_tok.span)
                inner = Node("Block", [nested], else_tok.span, {"synthetic": True})
                children.append(Node("Block", [inner], else_tok.span, {"synthetic": True}))
            elif self.at("{"):
                children.append(self.block(span=else_tok.span))
            else:
                stmt = self.statement()
                children.append(Node("Block", [stmt], else_tok.span, {"synthetic": False}))
        return Node("If", children, head, {"chained": else_span is not None})

    def loop(self) -> Node:
        kw = self.advance()
        kind = {"for": "ForLoop", "forall": "ForallLoop", "coforall": "CoforallLoop"}[kw.text]
        if self.at("("):
            lp = self.advance()
            names = [self.ident_node()]
            while self.accept(","):
                names.append(self.ident_node())
            self.expect(")")
            index = Node("TupleExpr", names, lp.span)
        else:
            index = self.ident_node()
        self.expect("in")
        iterable = self.expr()
        body = self.body("do")
        return Node(kind, [index, iterable, body], kw.span)

    def begin_stmt(self) -> Node:
        kw = self.expect("begin")
        if self.at("{"):
            body = self.block()
        else:
            stmt = self.statement()
            body = Node("Block", [stmt], stmt.span, {"synthetic": False, "braces": False})
        return Node("BeginStmt", [body], kw.span)

    def cobegin_stmt(self) -> Node:
        kw = self.expect("cobegin")
        self.expect("{")
        tasks = []
        while not self.at("}"):
            if self.tok.kind is K.EOF:
                self.error("unexpected end of file", expected=("}",))
            if self.at("{"):
                tasks.append(self.block())
            else:
                tasks.append(self.statement())
        self.expect("}")
        return Node("CobeginStmt", tasks, kw.span)

    def return_stmt(self) -> Node:
        kw = self.expect("return")
        children = [] if self.at(";") else [self.expr()]
        self.expect(";")
        return Node("ReturnStmt", children, kw.span)

    def yield_stmt(self) -> Node:
        kw = self.expect("yield")
        value = self.expr()
        self.expect(";")
        return Node("YieldStmt", [value], kw.span)

    def expr_statement(self) -> Node:
        start = self.tok
        target = self.expr()
        if self.tok.kind is K.OPERATOR and self.tok.text in ASSIGN_OPS:
            op = self.advance().text
            value = self.expr()
            self.expect(";")
            if target.kind not in ("Identifier", "IndexExpr", "MemberExpr", "TupleExpr"):
                self.error("invalid assignment target", target.span)
            return Node("AssignStmt", [target, value], start.span, {"op": op})
        self.expect(";")
        if target.kind != "CallExpr":
            self.error("expression statement must be a call or an assignment", start.span,
                       expected=("=", "("))
        callee = target.children[0]
        if callee.kind == "Identifier" and callee.attrs["name"] == "inlinecxx":
            return self.inline_cxx(target)
        target.span = start.span
        return target

    def inline_cxx(self, call: Node) -> Node:
        args = call.children[1:]
        if not args or args[0].kind != "Literal" or args[0].attrs["type"] != "string":
            self.error("inlinecxx expects a string literal format as its first argument",
                       call.span)
        fmt = args[0]
        return Node("InlineCxxCall", args[1:], call.span,
                    {"format": fmt.attrs["value"], "format_text": fmt.attrs["text"]})

    # -- expressions ---------------------------------------------------
    def expr(self, min_prec: int = 0) -> Node:
        if min_prec == 0 and self.at("if"):
            return self.ternary()
        lhs = self.prefix()
        while True:
            t = self.tok
            op = t.text if t.kind in (K.OPERATOR, K.KEYWORD) else None
            prec = BINARY_PREC.get(op)
            if prec is None or prec < min_prec:
                return lhs
            self.advance()
            if op == "..":
                lhs = self.range_tail(lhs, t)
                continue
            rhs = self.expr(prec if op in RIGHT_ASSOC else prec + 1)
            lhs = Node("BinaryExpr", [lhs, rhs], lhs.span, {"op": op})

    def range_tail(self, low: Node | None, dots: Token) -> Node:
        span = low.span if low is not None else dots.span
        counted = bool(self.accept("#"))
        children = [] if low is None else [low]
        has_high = counted or self.starts_expr()
        if has_high:
            children.append(self.expr(BINARY_PREC[".."] + 1))
        return Node("RangeLiteral", children, span,
                    {"counted": counted, "has_low": low is not None, "has_high": has_high})

    def starts_expr(self) -> bool:
        t = self.tok
        if t.kind in (K.IDENTIFIER, K.INTEGER, K.REAL, K.STRING):
            return True
        if t.kind is K.KEYWORD:
            return t.text in ("true", "false", "if")
        return t.text in ("(", "-", "+", "!", "~")

    def ternary(self) -> Node:
        kw = self.expect("if")
        cond = self.expr()
        self.expect("then")
        a = self.expr()
        self.expect("else")
        b = self.expr()
        return Node("TernaryExpr", [cond, a, b], kw.span)

    def prefix(self) -> Node:
        t = self.tok
        if t.kind is K.OPERATOR and t.text in PREFIX_PREC:
            self.advance()
            operand = self.expr(PREFIX_PREC[t.text])
            return Node("UnaryExpr", [operand], t.span, {"op": t.text})
        if t.kind is K.OPERATOR and t.text == "..":
            self.advance()
            return self.range_tail(None, t)
        return self.postfix(self.primary())

    def postfix(self, node: Node) -> Node:
        while True:
            if self.at("("):
                self.advance()
                args = self.arg_list(")")
                node = Node("CallExpr", [node] + args, node.span)
            elif self.at("["):
                self.advance()
                args = self.arg_list("]")
                if not args:
                    self.error("empty index", expected=("expression",))
                node = Node("IndexExpr", [node] + args, node.span)
            elif self.at("."):
                self.advance()
                name = self.expect_ident()
                node = Node("MemberExpr", [node], node.span, {"member": name.text})
            else:
                return node

    def arg_list(self, close: str) -> list[Node]:
        args = []
        if not self.at(close):
            while True:
                args.append(self.expr())
                if not self.accept(","):
                    break
        self.expect(close)
        return args

    def ident_node(self) -> Node:
        t = self.expect_ident()
        return Node("Identifier", [], t.span, {"name": t.text})

    def primary(self) -> Node:
        t = self.tok
        if t.kind is K.IDENTIFIER:
            return self.ident_node()
        if t.kind is K.INTEGER:
            self.advance()
            return Node("Literal", [], t.span, {"value": t.value, "type": "int", "text": t.text})
        if t.kind is K.REAL:
            self.advance()
            return Node("Literal", [], t.span, {"value": t.value, "type": "real", "text": t.text})
        if t.kind is K.STRING:
            self.advance()
            return Node("Literal", [], t.span,
                        {"value": t.value, "type": "string", "text": t.text})
        if t.kind is K.KEYWORD and t.text in ("true", "false"):
            self.advance()
            return Node("Literal", [], t.span,
                        {"value": t.text == "true", "type": "bool", "text": t.text})
        if self.at("("):
            self.advance()
            first = self.expr()
            if self.at(")"):
                self.advance()
                first.attrs["parens"] = first.attrs.get("parens", 0) + 1
                return first
            elems = [first]
            trailing = False
            while self.accept(","):
                if self.at(")"):
                    trailing = True
                    break
                elems.append(self.expr())
            self.expect(")")
            return Node("TupleExpr", elems, t.span, {"trailing_comma": trailing})
        if self.at("{"):
            self.advance()
            dims = self.arg_list("}")
            if not dims:
                self.error("empty domain literal", t.span, expected=("range",))
            return Node("DomainLiteral", dims, t.span)
        if self.at("if"):
            return self.ternary()
        self.error(f"unexpected {self.describe(t)}", expected=("expression",))


def _module_name(file: str) -> str:
    base = file.replace("\\", "/").rsplit("/", 1)[-1]
    return base[:-5] if base.endswith(".chpl") else base.rsplit(".", 1)[0] or "main"


def parse(tokens: list[Token]) -> Node:
    """Build the Module AST (nested-conditional form) from a token list."""
    return Parser(tokens).parse_module()
