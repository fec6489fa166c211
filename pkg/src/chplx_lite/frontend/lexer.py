"""Tokenizer for the supported Chapel subset."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..diagnostics import Diagnostic, LexError, SourceSpan


class TokenKind(enum.Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    INTEGER = "integer-literal"
    REAL = "real-literal"
    STRING = "string-literal"
    OPERATOR = "operator"
    PUNCTUATION = "punctuation"
    EOF = "eof"


KEYWORDS = frozenset({
    "var", "const", "config", "proc", "iter", "for", "forall", "coforall",
    "in", "do", "if", "then", "else", "begin", "cobegin", "return", "yield",
    "by", "align", "true", "false", "atomic", "sync", "single",
})

# longest first so that maximal munch is a simple prefix scan
OPERATORS = sorted([
    "<=>", "<<=", ">>=", "**=", "...", "..", "**", "<<", ">>", "<=", ">=",
    "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^", "~", "#", "?",
], key=len, reverse=True)

PUNCTUATION = frozenset("()[]{},;:.")

_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", '"': '"', "'": "'", "r": "\r", "0": "\0"}


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: SourceSpan
    value: object = None

    def is_(self, kind: TokenKind, text: str | None = None) -> bool:
        return self.kind is kind and (text is None or self.text == text)

    def __repr__(self):
        return f"Token({self.kind.value}, {self.text!r}, {self.span.line}:{self.span.column})"


class _Scanner:
    def __init__(self, source: str, file: str):
        self.src = source
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1

    def peek(self, k: int = 0) -> str:
        i = self.pos + k
        return self.src[i] if i < len(self.src) else ""

    def advance(self, n: int = 1):
        for _ in range(n):
            if self.src[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def span(self) -> SourceSpan:
        return SourceSpan(self.file, self.line, self.col)


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    """Split *source* into tokens; the result always ends with an eof token."""
    sc = _Scanner(source, file)
    out: list[Token] = []
    src = source
    while sc.pos < len(src):
        ch = sc.peek()
        if ch in " \t\r\n\f\v":
            sc.advance()
            continue
        if ch == "/" and sc.peek(1) == "/":
            while sc.pos < len(src) and sc.peek() != "\n":
                sc.advance()
            continue
        if ch == "/" and sc.peek(1) == "*":
            start = sc.span()
            end = src.find("*/", sc.pos + 2)
            if end < 0:
                raise LexError(Diagnostic("unterminated block comment", start))
            sc.advance(end + 2 - sc.pos)
            continue

        start = sc.span()
        if ch.isalpha() or ch == "_":
            begin = sc.pos
            while sc.peek() and (sc.peek().isalnum() or sc.peek() in "_$"):
                sc.advance()
            text = src[begin:sc.pos]
            kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENTIFIER
            out.append(Token(kind, text, start))
        elif ch.isdigit():
            out.append(_number(sc, start))
        elif ch in "\"'":
            out.append(_string(sc, start))
        else:
            for op in OPERATORS:
                if src.startswith(op, sc.pos):
                    sc.advance(len(op))
                    out.append(Token(TokenKind.OPERATOR, op, start))
                    break
            else:
                if ch in PUNCTUATION:
                    sc.advance()
                    out.append(Token(TokenKind.PUNCTUATION, ch, start))
                else:
                    raise LexError(Diagnostic(f"unexpected character {ch!r}", start))
    out.append(Token(TokenKind.EOF, "", sc.span()))
    return out


def _number(sc: _Scanner, start: SourceSpan) -> Token:
    src = sc.src
    begin = sc.pos
    if sc.peek() == "0" and sc.peek(1) in ("x", "X", "b", "B", "o", "O"):
        base = {"x": 16, "b": 2, "o": 8}[sc.peek(1).lower()]
        sc.advance(2)
        while sc.peek() and (sc.peek().isalnum() or sc.peek() == "_"):
            sc.advance()
        text = src[begin:sc.pos]
        try:
            value = int(text[2:].replace("_", ""), base)
        except ValueError:
            raise LexError(Diagnostic(f"malformed integer literal {text!r}", start)) from None
        return Token(TokenKind.INTEGER, text, start, value)

    def digits():
        while sc.peek().isdigit() or (sc.peek() == "_" and sc.peek(1).isdigit()):
            sc.advance()

    digits()
    is_real = False
    # "1..10" is a range, not the real "1." followed by ".10"
    if sc.peek() == "." and sc.peek(1).isdigit():
        is_real = True
        sc.advance()
        digits()
    if sc.peek() in ("e", "E") and (sc.peek(1).isdigit() or
                                    (sc.peek(1) in "+-" and sc.peek(2).isdigit())):
        is_real = True
        sc.advance(2)
        digits()
    text = src[begin:sc.pos]
    clean = text.replace("_", "")
    if is_real:
        return Token(TokenKind.REAL, text, start, float(clean))
    return Token(TokenKind.INTEGER, text, start, int(clean))


def _string(sc: _Scanner, start: SourceSpan) -> Token:
    quote = sc.peek()
    begin = sc.pos
    sc.advance()
    chars = []
    while True:
        ch = sc.peek()
        if ch == "" or ch == "\n":
            raise LexError(Diagnostic("unterminated string literal", start))
        if ch == quote:
            sc.advance()
            break
        if ch == "\\":
            esc = sc.peek(1)
            if esc == "":
                raise LexError(Diagnostic("unterminated string literal", start))
            chars.append(_ESCAPES.get(esc, "\\" + esc))
            sc.advance(2)
            continue
        chars.append(ch)
        sc.advance()
    return Token(TokenKind.STRING, sc.src[begin:sc.pos], start, "".join(chars))
