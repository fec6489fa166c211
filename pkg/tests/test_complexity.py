import csv

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chplx_lite.bench import chapel_source
from chplx_lite.complexity import (cocomo_effort, cocomo_schedule, count_loc, count_text,
                                   estimated_schedule, main, report_complexity)

from conftest import GOLDEN

mpmath.mp.dps = 50


def test_count_examples():
    src = "var a = 1;\n// one\nvar b = 2;\n\n/* two */\nwriteln(a + b);\n"
    c = count_text(src, "chapel")
    assert (c.code, c.comment, c.blank) == (3, 2, 1)
    assert count_text("// a\n/* b\n\n c */\n", "chapel").code == 0


def test_directive_fragment_counts():
    frag = '#line 8 "expr.chpl"\n    a: int = 1 + 1\n#line 9 "expr.chpl"\n    a = a + 1\n'
    assert count_text(frag, "target").code == 4
    assert count_text(frag, "target", exclude_line_directives=True).code == 2


def test_chapel_comment_details():
    assert count_text('writeln("// not a comment");\n', "chapel").code == 1
    assert count_text("x = 1; /* tail */\n", "chapel").code == 1
    # block comments do not nest: the first */ closes
    c = count_text("/* a /* b */ y = 2;\n", "chapel")
    assert c.code == 1
    assert count_text("/*\n\n*/\n", "chapel").comment == 3


def test_target_comments():
    c = count_text("x = 1  # @srcline a.chpl:1\n# plain comment\n\n", "target")
    assert (c.code, c.comment, c.blank) == (1, 1, 1)
    with pytest.raises(ValueError):
        count_text("", "fortran")


lines = st.lists(st.sampled_from(["", "   ", "x = 1;", "// c", "/* c */", "/* open",
                                  "close */", "y(); // t", '"/*"', "#line 3 \"f\"",
                                  "# note"]), max_size=30)


@given(lines, st.sampled_from(["chapel", "target"]), st.booleans())
def test_partition_law(body, language, exclude):
    text = "\n".join(body) + ("\n" if body else "")
    c = count_text(text, language, exclude)
    assert c.code + c.comment + c.blank == len(body) == c.total


def test_count_loc_file(tmp_path):
    path = tmp_path / "e.py"
    path.write_text((GOLDEN / "expr.py").read_text())
    assert count_loc(path).code == 5
    assert count_loc(path, exclude_line_directives=True).code == 3
    with pytest.raises(OSError):
        count_loc(tmp_path / "missing.chpl")


def test_cocomo_against_mpmath():
    assert cocomo_effort(0) == 0 and cocomo_schedule(0) == 0
    assert cocomo_effort(1) == pytest.approx(2.4, rel=1e-15)
    oracle = mpmath.mpf("2.5") * mpmath.power(mpmath.mpf("2.4"), mpmath.mpf("0.38"))
    assert cocomo_schedule(2.4) == pytest.approx(float(oracle), rel=1e-6)
    assert round(float(oracle), 2) == 3.49
    k = mpmath.mpf(7) / 1000
    want = mpmath.mpf("2.5") * (mpmath.mpf("2.4") * k ** mpmath.mpf("1.05")) ** mpmath.mpf("0.38")
    assert estimated_schedule(7) == pytest.approx(float(want), rel=1e-12)
    for bad in (cocomo_effort, cocomo_schedule):
        with pytest.raises(ValueError):
            bad(-1)


@given(st.floats(0, 1000), st.floats(0, 1000))
def test_ese_monotone(k1, k2):
    lo, hi = sorted((k1, k2))
    assert cocomo_schedule(cocomo_effort(lo)) <= cocomo_schedule(cocomo_effort(hi))


def _fake_set(tmp_path, chapel_code, program_code, support_code):
    chpl = tmp_path / "k.chpl"
    chpl.write_text("".join(f"x{i} = {i};\n" for i in range(chapel_code)))
    prog = tmp_path / "k.py"
    prog.write_text("".join(f"x{i} = {i}\n" for i in range(program_code)))
    sup = tmp_path / "k_main.py"
    sup.write_text("".join(f"y{i} = {i}\n" for i in range(support_code)))
    return chpl, prog, sup


def test_report_gap(tmp_path):
    chpl, prog, sup = _fake_set(tmp_path, 20, 24, 3)
    rep = report_complexity([chpl], [prog], [sup])
    (row,) = rep.rows
    assert (row.chapel_loc, row.cpp_loc, row.boilerplate_loc) == (20, 24, 27)
    assert row.loc_gap == 4 and rep.max_loc_gap <= 5
    assert row.boilerplate_loc >= row.cpp_loc


def test_identical_file_zero_gap(tmp_path):
    f = tmp_path / "same.chpl"
    f.write_text("var a = 1;\nvar b = 2;\n")
    g = tmp_path / "same.py"
    g.write_text("a = 1\nb = 2\n")
    rep = report_complexity([f], [g])
    assert rep.rows[0].loc_gap == 0 and rep.mean_ese_gap() == 0.0


def test_report_on_benchmarks(bench_build):
    chapel = [chapel_source(b) for b in ("heat", "stream", "gups")]
    programs = [bench_build / f"{b}.py" for b in ("heat", "stream", "gups")]
    support = [bench_build / f"{b}_main.py" for b in ("heat", "stream", "gups")]
    rep = report_complexity(chapel, programs, support)
    assert len(rep.rows) == 3 and rep.max_loc_gap <= 5
    assert rep.mean_ese_gap() <= 0.7
    assert rep.median_ese_gap() == sorted(rep.ese_gaps())[1]
    assert "median" in rep.table()


def test_report_missing_program(tmp_path):
    chpl, _, _ = _fake_set(tmp_path, 1, 1, 1)
    with pytest.raises(ValueError):
        report_complexity([chpl], [])


def test_complexity_cli(tmp_path, capsys):
    chpl, prog, sup = _fake_set(tmp_path, 10, 12, 2)
    out = tmp_path / "c.csv"
    assert main(["--chapel", str(chpl), "--generated", str(prog), "--support", str(sup),
                 "--csv", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["benchmark", "chapel_loc", "cpp_loc", "boilerplate_loc", "chapel_ese",
                       "cpp_ese", "boilerplate_ese"]
    assert rows[1][:4] == ["k", "10", "12", "14"]
    assert "ESE gap" in capsys.readouterr().out
    assert main(["--chapel", str(tmp_path / "nope.chpl"), "--generated", str(prog),
                 "--csv", str(out)]) == 1
