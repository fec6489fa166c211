"""Lexing, parsing and conditional normalization for the Chapel subset."""

from __future__ import annotations

from pathlib import Path

from .ast import Node, is_statement
from .lexer import Token, TokenKind, tokenize
from .normalize import count_conditions, normalize_conditionals
from .parser import parse
from .unparse import unparse, unparse_expr

__all__ = [
    "Node", "Token", "TokenKind", "tokenize", "parse", "normalize_conditionals",
    "parse_source", "parse_file", "unparse", "unparse_expr", "is_statement",
    "count_conditions",
]


def parse_source(source: str, file: str = "<input>") -> Node:
    return normalize_conditionals(parse(tokenize(source, file)))


def parse_file(path) -> Node:
    """Read, tokenize, parse and normalize one ``.chpl`` file.

    Spans carry the file's base name, which is also what provenance
    directives print.
    """
    path = Path(path)
    source = path.read_text(encoding="utf-8")
    return parse_source(source, path.name)
