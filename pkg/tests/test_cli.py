import json

from chplx_lite.cli import main

from conftest import FIXTURES, GOLDEN


def test_compile_ok(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["compile", str(FIXTURES / "expr.chpl"), "-o", str(out)]) == 0
    assert (out / "expr.py").read_text() == (GOLDEN / "expr.py").read_text()
    assert (out / "expr_main.py").exists()
    assert "wrote" in capsys.readouterr().out


def test_compile_options(tmp_path):
    out = tmp_path / "out"
    assert main(["compile", str(FIXTURES / "expr.chpl"), "-o", str(out),
                 "--no-line-directives", "--indent", "2", "--emit-build",
                 "--dump-ast", "--dump-symbols", "--dump-ir"]) == 0
    assert (out / "expr.py").read_text() == "def expr():\n  a: int = 1 + 1\n  a = a + 1\n"
    assert (out / "Makefile").exists()
    ast = json.loads((out / "expr.ast.json").read_text())
    assert ast["kind"] == "Module"
    for name in ("expr.symbols.json", "expr.ir.json"):
        json.loads((out / name).read_text())


def test_compile_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.chpl"
    bad.write_text("var a = 1;\nb = a;\n")
    assert main(["compile", str(bad), "-o", str(tmp_path / "out")]) == 1
    err = capsys.readouterr().err
    assert "bad.chpl:2" in err


def test_io_error_exit_2(tmp_path, capsys):
    assert main(["compile", str(tmp_path / "missing.chpl"), "-o", str(tmp_path / "o")]) == 2
    assert "error:" in capsys.readouterr().err
    binary = tmp_path / "bin.chpl"
    binary.write_bytes(b"\xff\xfe\x00var")
    assert main(["compile", str(binary), "-o", str(tmp_path / "o")]) == 2
