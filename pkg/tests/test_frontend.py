import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chplx_lite.bench import chapel_source
from chplx_lite.diagnostics import CompileError, LexError, ParseError
from chplx_lite.frontend import (count_conditions, normalize_conditionals, parse, parse_file,
                                 parse_source, tokenize, unparse)
from chplx_lite.frontend.ast import Node
from chplx_lite.frontend.lexer import TokenKind

from conftest import FIXTURES, GOLDEN


def kinds_texts(source):
    return [(t.kind.value, t.text) for t in tokenize(source, "t.chpl")]


def test_tokenize_declaration():
    assert kinds_texts("var a : int = 1 + 1;") == [
        ("keyword", "var"), ("identifier", "a"), ("punctuation", ":"),
        ("identifier", "int"), ("operator", "="), ("integer-literal", "1"),
        ("operator", "+"), ("integer-literal", "1"), ("punctuation", ";"), ("eof", ""),
    ]


def test_tokenize_empty_and_comments():
    assert kinds_texts("") == [("eof", "")]
    assert kinds_texts("/* x */ 5") == [("integer-literal", "5"), ("eof", "")]
    assert kinds_texts("// only\n") == [("eof", "")]


def test_token_spans_point_at_first_character():
    toks = tokenize("var x = 1;\n  x = 2;", "s.chpl")
    x2 = toks[5]
    assert (x2.text, x2.span.line, x2.span.column) == ("x", 2, 3)


def test_lex_errors_carry_span():
    with pytest.raises(LexError) as e:
        tokenize('var s = "abc;', "bad.chpl")
    assert e.value.diagnostics[0].span.line == 1
    with pytest.raises(LexError):
        tokenize("/* never closed", "bad.chpl")


def test_nested_if_form():
    m = parse(tokenize("if c1 {} else if c2 {}", "t.chpl"))
    top = m.children[0]
    assert top.kind == "If" and len(top.children) == 3
    tail = top.children[2]
    assert tail.kind == "Block" and tail.children[0].kind == "Block"
    inner = tail.children[0].children[0]
    assert inner.kind == "If" and inner.children[0].attrs["name"] == "c2"


def test_parse_simple_declaration():
    m = parse_source("var i = 0;")
    (d,) = m.children
    assert d.kind == "VarDecl" and d.attrs["name"] == "i"
    assert d.children[0].attrs["value"] == 0


def test_parse_inlinecxx():
    m = parse_source('inlinecxx("std::cout << {} << std::endl", i);')
    (c,) = m.children
    assert c.kind == "InlineCxxCall"
    assert c.attrs["format"] == "std::cout << {} << std::endl"
    assert [a.attrs["name"] for a in c.children] == ["i"]


def test_syntax_error_has_expected_set():
    with pytest.raises(ParseError) as e:
        parse_source("var x = ;")
    d = e.value.diagnostics[0]
    assert d.span.line == 1 and d.expected


def test_normalize_table_form():
    m = parse_source("if c1 { var x = 1; } else if c2 { }")
    chain = m.children[0]
    assert chain.kind == "ConditionalChain"
    assert [c.attrs["name"] for c, _ in chain.clauses] == ["c1", "c2"]
    assert chain.else_body is None


def test_normalize_if_else():
    chain = parse_source("if c { f(); } else { g(); }").children[0]
    assert len(chain.clauses) == 1 and chain.else_body is not None


def test_normalize_identity_without_conditionals():
    raw = parse(tokenize("var a = 1; for i in 1..3 { a += i; }", "t.chpl"))
    assert normalize_conditionals(raw).structure() == raw.structure()


def test_parse_file_variants(tmp_path):
    empty = tmp_path / "empty.chpl"
    empty.write_text("")
    assert parse_file(empty).children == []
    comments = tmp_path / "c.chpl"
    comments.write_text("// a\n/* b\n c */\n")
    assert parse_file(comments).children == []


def test_heat_ast_golden():
    ast = parse_file(chapel_source("heat"))
    golden = json.loads((GOLDEN / "heat.ast.json").read_text())
    assert ast.to_json() == golden
    assert sum(n.kind == "ForallLoop" for n in ast.walk()) == 2
    assert Node.from_json(golden).structure() == ast.structure()


def test_statement_spans_match_lines():
    src = (FIXTURES / "tasks.chpl").read_text().splitlines()
    ast = parse_file(FIXTURES / "tasks.chpl")
    for n in ast.children:
        line = src[n.span.line - 1]
        assert line.strip(), n
        assert n.span.column == len(line) - len(line.lstrip()) + 1


def test_no_if_left_after_normalization():
    ast = parse_file(FIXTURES / "tasks.chpl")
    assert not any(n.kind == "If" for n in ast.walk())


def test_do_and_then_forms():
    ast = parse_source("for i in 1..3 do f(i);\nif x then g(); else h();")
    loop, chain = ast.children
    assert loop.body.kind == "Block" and loop.body.children[0].kind == "CallExpr"
    assert chain.else_body.children[0].kind == "CallExpr"


# -- properties ----------------------------------------------------------

names = st.sampled_from(["a", "b", "c", "n", "x"])


@st.composite
def chains(draw, depth=0):
    k = draw(st.integers(1, 6))
    parts = []
    for i in range(k):
        cond = draw(names)
        body = draw(st.sampled_from(["", "f();", "var t = 1;"]))
        if depth < 1 and draw(st.booleans()):
            body += " " + draw(chains(depth + 1))
        parts.append(("if" if i == 0 else "else if") + f" {cond} {{ {body} }}")
    if draw(st.booleans()):
        parts.append("else { g(); }")
    return " ".join(parts)


@settings(max_examples=150, deadline=None)
@given(chains())
def test_normalization_idempotent_and_counts(src):
    raw = parse(tokenize(src, "p.chpl"))
    once = normalize_conditionals(raw)
    assert normalize_conditionals(once).structure() == once.structure()
    assert count_conditions(raw) == count_conditions(once)


exprs = st.recursive(
    st.one_of(names, st.integers(0, 99).map(str), st.just("2.5"), st.just('"s"')),
    lambda inner: st.one_of(
        st.tuples(inner, st.sampled_from(["+", "-", "*", "/", "%", "**", "<", "==", "&&",
                                          "||", "&", "|", "^", "<<", ".."]), inner)
        .map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        inner.map(lambda e: f"-{e}"),
        st.tuples(names, inner).map(lambda t: f"{t[0]}[{t[1]}]"),
        st.tuples(names, inner).map(lambda t: f"{t[0]}({t[1]})"),
        st.tuples(inner, inner).map(lambda t: f"({t[0]}, {t[1]})"),
        st.tuples(inner, inner, inner).map(lambda t: f"(if {t[0]} then {t[1]} else {t[2]})"),
    ),
    max_leaves=8)

statements = st.one_of(
    exprs.map(lambda e: f"var v = {e};"),
    st.tuples(names, exprs).map(lambda t: f"{t[0]} += {t[1]};"),
    exprs.map(lambda e: f"writeln({e});"),
    st.tuples(names, exprs).map(lambda t: f"forall {t[0]} in {t[1]} {{ f({t[0]}); }}"),
    st.tuples(names, exprs).map(lambda t: f"for ({t[0]}, y) in {t[1]} {{ }}"),
    exprs.map(lambda e: f"begin f({e});"),
    exprs.map(lambda e: f"proc p(q: int, r): int {{ return {e}; }}"),
    st.just("cobegin { f(); { g(); } }"),
    st.just("config const k: real = 1.5;"),
    st.just("var A: [1..3, 0..n] atomic int;"),
)


def _token_texts(src):
    return [(t.kind, t.text) for t in tokenize(src, "r.chpl") if t.kind is not TokenKind.EOF]


@settings(max_examples=200, deadline=None)
@given(st.lists(statements, min_size=1, max_size=4))
def test_unparse_round_trip(stmts):
    src = "\n".join(stmts)
    ast = parse_source(src, "r.chpl")
    again = parse_source(unparse(ast), "r.chpl")
    # spans move, shape does not
    strip = lambda n: (n.kind, tuple(sorted((k, repr(v)) for k, v in n.attrs.items())),
                       tuple(strip(c) for c in n.children))
    assert strip(again) == strip(ast)


def test_unparse_token_stream_equal_modulo_whitespace():
    src = "var a : int = 1 + 1;\nfor i in 1..10 by 2 {\n  a += i;\n}\n"
    assert _token_texts(unparse(parse_source(src))) == _token_texts(src)


def test_parse_errors_are_compile_errors():
    with pytest.raises(CompileError):
        parse_source("forall i in { }")
