import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chplx_lite.codegen import translate
from chplx_lite.diagnostics import CompileError
from chplx_lite.frontend import parse_source
from chplx_lite.symtab import (build_program_symbol_table, enumerate_descendants,
                               expected_scope_count, lookup_scope_by_line, resolve_symbol)

BUILTIN_TYPE_NAMES = {"nil", "bool", "string", "int", "real", "complex", "tuple", "range",
                      "domain", "function"}


def table(src, file="t.chpl"):
    return build_program_symbol_table(parse_source(src, file))


def test_module_scope_builtins():
    t = table("var a = 1;")
    root = t.scope(t.root).symbols
    assert "a" in root
    assert {n for n, s in root.items() if s.kind == "builtin-type"} == BUILTIN_TYPE_NAMES
    assert root["?"].kind == "builtin-template"
    assert "inlinecxx" in root and "+" in root
    assert all(s.decl_span.line == 0 for s in root.values() if s.name != "a")


def test_empty_module_single_scope():
    t = table("")
    assert list(t.scopes) == [t.root]
    assert t.scope(t.root).parent is None


def test_clause_isolation_example():
    t = table("var c = true; var d = false;\nif c {\n var x = 1;\n} else if d {\n}\n")
    first = lookup_scope_by_line(t, "t.chpl", 2)
    second = lookup_scope_by_line(t, "t.chpl", 4)
    assert t.scope(first).scope_name == "if_t_2"
    assert t.scope(second).scope_name == "else_if_t_4"
    assert "x" in t.scope(first).symbols
    assert resolve_symbol(t, second, "x") is None
    assert resolve_symbol(t, first, "x") is not None


def test_forall_scope_name():
    src = "\n" * 11 + "forall i in 1..4 { }\n"
    t = table(src, "heat.chpl")
    sid = lookup_scope_by_line(t, "heat.chpl", 12)
    assert t.scope(sid).scope_name == "forall_heat_12"
    assert lookup_scope_by_line(t, "heat.chpl", 1) == t.root
    assert lookup_scope_by_line(t, "heat.chpl", 5) is None


def test_same_line_scopes_outermost_and_column():
    src = "\nfor i in 1..2 { for j in 1..2 { } }"
    t = table(src)
    outer = lookup_scope_by_line(t, "t.chpl", 2)
    assert t.scope(outer).kind == "for" and t.scope(outer).parent == t.root
    inner_span = parse_source(src, "t.chpl").children[0].body.children[0].span
    inner = t.scope_at(inner_span)
    assert t.scope(inner).parent == outer


def test_resolve_up_not_down():
    t = table("var a = 1;\nfor i in 1..2 {\n  for j in 1..2 {\n    var b = a;\n  }\n}\n")
    deep = lookup_scope_by_line(t, "t.chpl", 3)
    assert resolve_symbol(t, deep, "a").scope == t.root
    assert resolve_symbol(t, deep, "int").kind == "builtin-type"
    assert resolve_symbol(t, t.root, "b") is None


def test_enumerate_descendants():
    t = table("for i in 1..2 {\n  for j in 1..2 {\n    if j > 1 { }\n  }\n}\n")
    order = enumerate_descendants(t, t.root)
    assert len(order) == 4 and order[0] == t.root
    assert [t.scope(s).kind for s in order] == ["module", "for", "for", "if"]
    leaf = order[-1]
    assert enumerate_descendants(t, leaf) == [leaf]
    t2 = table("proc p1() { }\nproc p2() { }\n")
    assert [t2.scope(s).scope_name for s in enumerate_descendants(t2, t2.root)][1:] == \
        ["p1", "p2"]


def test_duplicate_declaration():
    with pytest.raises(CompileError) as e:
        table("var a = 1;\nvar a = 2;\n")
    d = e.value.diagnostics[0]
    assert d.span.line == 2 and d.related[0].line == 1


def test_shadowing_across_scopes():
    t = table("var a = 1;\nfor i in 1..2 {\n  var a = 2.0;\n}\n")
    inner = lookup_scope_by_line(t, "t.chpl", 2)
    assert resolve_symbol(t, inner, "a").decl_span.line == 3


def test_scope_count_matches_ast():
    src = ("proc f() { }\nbegin { }\ncobegin { f(); { f(); } }\n"
           "if a { } else if b { } else { }\nforall i in 1..2 { }\n")
    ast = parse_source(src)
    t = build_program_symbol_table(ast)
    assert len(t.scopes) == expected_scope_count(ast)


def test_tree_consistency():
    t = table("for i in 1..2 { if i > 1 { } else { } }\nbegin { }\n")
    roots = [s for s in t.scopes.values() if s.parent is None]
    assert len(roots) == 1
    for s in t.scopes.values():
        for c in s.children:
            assert t.scope(c).parent == s.id


# -- clause isolation over random chains ------------------------------------

@st.composite
def chain_programs(draw):
    """Chain of 1..6 clauses (plus optional else); one clause declares x."""
    k = draw(st.integers(1, 6))
    has_else = draw(st.booleans())
    n = k + has_else
    decl = draw(st.integers(0, n - 1))
    use = draw(st.integers(0, n - 1))
    lines = ["var c = 1;"]
    for i in range(n):
        head = "if c > 0 {" if i == 0 else ("} else {" if i == k else f"}} else if c > {i} {{")
        lines.append(head)
        if i == decl:
            lines.append("  var x = 1;")
        if i == use:
            lines.append("  writeln(x);")
    lines.append("}")
    return "\n".join(lines) + "\n", decl, use, n


@settings(max_examples=200, deadline=None)
@given(chain_programs())
def test_clause_isolation_property(case):
    src, decl, use, n = case
    ast = parse_source(src, "chain.chpl")
    chain = ast.children[1]
    assert chain.kind == "ConditionalChain"
    assert len(chain.clauses) + (chain.else_body is not None) == n
    t = build_program_symbol_table(ast)
    clause_scopes = [t.scope_at(body.span) for _, body in chain.clauses]
    if chain.else_body is not None:
        clause_scopes.append(t.scope_at(chain.else_body.span))
    for i, sid in enumerate(clause_scopes):
        found = resolve_symbol(t, sid, "x")
        assert (found is not None) == (i == decl)
    if use == decl:
        translate(src, "chain.chpl")
    else:
        with pytest.raises(CompileError, match="x"):
            translate(src, "chain.chpl")


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "c"]), min_size=1, max_size=6),
       st.integers(0, 5), st.sampled_from(["a", "b", "c", "zz"]))
def test_resolve_matches_brute_force(decls, depth, query):
    lines = []
    for i, name in enumerate(decls[:depth + 1]):
        lines.append("  " * i + f"for i{i} in 1..2 {{")
        lines.append("  " * (i + 1) + f"var {name}{i} = {i};")
    for i in reversed(range(len(lines) // 2)):
        lines.append("  " * i + "}")
    t = table("\n".join(lines) + "\n")
    deepest = enumerate_descendants(t, t.root)[-1]
    for sid in t.scopes:
        for name in [f"{d}{i}" for i, d in enumerate(decls)] + [query]:
            brute = any(name in t.scope(a).symbols for a in t.ancestors(sid))
            assert (resolve_symbol(t, sid, name) is not None) == brute
    assert deepest in t.scopes
