"""Acceptance checks, one test per criterion; the summary prints a verdict line each."""

import os
import random
import threading
import time

import numpy as np
import pytest
from hypothesis import given, settings

from chplx_lite.bench import (GupsParams, HeatParams, StreamParams, chapel_source,
                              gups_reference, heat_reference, initial_field, run_gups,
                              run_stream, write_results_csv)
from chplx_lite.codegen import translate
from chplx_lite.complexity import (cocomo_effort, cocomo_schedule, count_loc,
                                   report_complexity)
from chplx_lite.diagnostics import CompileError
from chplx_lite.frontend import parse, tokenize
from chplx_lite.frontend import normalize_conditionals
from chplx_lite.runtime import (Atomic, Range, Sync, coforall, forall, forall_blocks, kernels,
                                parallel_quicksort, pool_session)
from chplx_lite.symtab import build_program_symbol_table, resolve_symbol

from conftest import FIXTURES, GOLDEN, compile_to, run_generated
from test_runtime import _oracle_seq, range_programs
from test_symtab import chain_programs

BENCHES = ("heat", "stream", "gups")


@pytest.mark.criterion(1, "directive round-trip")
def test_c1_directive_round_trip(tmp_path):
    t0 = time.perf_counter()
    compile_to(tmp_path, FIXTURES / "expr.chpl")
    elapsed = time.perf_counter() - t0
    text = (tmp_path / "expr.py").read_text()
    assert text == (GOLDEN / "expr.py").read_text()
    lines = text.splitlines()
    assert lines[1] == '#line 8 "expr.chpl"' and lines[3] == '#line 9 "expr.chpl"'
    assert elapsed < 1.0


@pytest.mark.criterion(2, "inlinecxx expansion")
def test_c2_inlinecxx():
    text = translate((FIXTURES / "inline.chpl").read_text(), "inline.chpl").unit \
        .program_file[1]
    body = [ln.strip() for ln in text.splitlines() if not ln.startswith(("#", "def "))]
    assert body == ["i = 0", "std::cout << i << std::endl", "std::cout << i << std::endl"]
    with pytest.raises(CompileError) as e:
        translate('var i = 0;\ninlinecxx("{} {}", i);\n', "bad.chpl")
    span = e.value.diagnostics[0].span
    assert (span.file, span.line) == ("bad.chpl", 2)


@settings(max_examples=300, deadline=None)
@given(chain_programs())
def _chain_isolation(case):
    src, decl, use, n = case
    if use == decl:
        translate(src, "chain.chpl")
    else:
        with pytest.raises(CompileError):
            translate(src, "chain.chpl")


@pytest.mark.criterion(3, "conditional normalization and clause scoping")
def test_c3_conditionals():
    src = "var c1 = true; var c2 = false;\nif c1 {\n var x = 1;\n} else if c2 {\n}\n"
    raw = parse(tokenize(src, "t.chpl"))
    assert raw.children[2].kind == "If"
    ast = normalize_conditionals(raw)
    chain = ast.children[2]
    assert chain.kind == "ConditionalChain" and len(chain.clauses) == 2
    table = build_program_symbol_table(ast)
    first = table.scope_at(chain.clauses[0][1].span)
    second = table.scope_at(chain.clauses[1][1].span)
    assert resolve_symbol(table, first, "x") is not None
    assert resolve_symbol(table, second, "x") is None
    _chain_isolation()


@pytest.mark.criterion(4, "LOC gap <= 5 and mean ESE gap <= 0.7")
def test_c4_loc_gap(bench_build):
    chapel = [chapel_source(b) for b in BENCHES]
    programs = [bench_build / f"{b}.py" for b in BENCHES]
    support = [bench_build / f"{b}_main.py" for b in BENCHES]
    rep = report_complexity(chapel, programs, support)
    print(rep.table())
    for row in rep.rows:
        assert row.loc_gap <= 5, (row.benchmark, row.loc_gap)
    assert rep.mean_ese_gap() <= 0.7


@pytest.mark.criterion(4, "LOC gap <= 5 and mean ESE gap <= 0.7")
def test_c4_loc_gap_line_style_excluding_directives(tmp_path):
    compile_to(tmp_path, *(chapel_source(b) for b in BENCHES))
    for b in BENCHES:
        gap = count_loc(tmp_path / f"{b}.py", exclude_line_directives=True).code - \
            count_loc(chapel_source(b)).code
        assert gap <= 5, (b, gap)


@pytest.mark.criterion(5, "heat generated program matches scalar oracle")
def test_c5_heat(tmp_path):
    p = HeatParams(nx=1024, nt=100)
    want = heat_reference(initial_field(p.nx), p)
    t0 = time.perf_counter()
    compile_to(tmp_path, chapel_source("heat"))
    outputs = {}
    for threads in (1, 2, 4, 8):
        r = run_generated(tmp_path, "heat", "--nx=1024", "--nt=100", "--printField=true",
                          f"--threads={threads}")
        assert r.returncode == 0, r.stderr
        outputs[threads] = [float(v) for v in r.stdout.splitlines()[:-1]]
    elapsed = time.perf_counter() - t0
    for threads, got in outputs.items():
        assert got == want, threads
    assert elapsed < 5.0


@pytest.mark.criterion(6, "GUPS final table equals sequential oracle")
def test_c6_gups():
    p = GupsParams(table_size=1 << 16, updates=10 ** 6, seed=1)
    want = gups_reference(p)
    elapsed = 0.0
    for threads in (1, 2, 4, 8):
        t0 = time.perf_counter()
        r = run_gups(p, threads)
        elapsed += time.perf_counter() - t0
        assert np.array_equal(r.output, want), threads
    assert elapsed < 5.0


@pytest.mark.criterion(7, "STREAM post-conditions and CSV")
def test_c7_stream(tmp_path):
    n, q = 10 ** 6, 3.0
    results = run_stream(StreamParams(n=n, q=q), 4)
    x = np.arange(n, dtype=np.float64) + 1.0
    outs = {r.benchmark: r.output for r in results}
    assert np.array_equal(outs["stream-copy"], x)
    assert np.array_equal(outs["stream-scale"], q * x)
    assert np.array_equal(outs["stream-add"], x + q * x)
    assert np.array_equal(outs["stream-triad"], q * x + q * (x + q * x))
    path = tmp_path / "stream.csv"
    write_results_csv(results, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "threads,seconds,rate" and len(lines) == 5
    for line in lines[1:]:
        t, s, rate = line.split(",")
        assert t == "4" and float(s) > 0 and float(rate) > 0


@settings(max_examples=10_000, deadline=None)
@given(range_programs())
def _range_cases(prog):
    lo, hi, s, ops = prog
    r = Range(lo, hi).by(s)
    seq = _oracle_seq(lo, hi, s, lo if s > 0 else hi)
    stride = s
    for op, v in ops:
        if op == "by" and abs(stride * v) <= 8:
            r, stride = r.by(v), stride * v
            seq = seq[::v] if v > 0 else seq[::-1][::-v]
        elif op == "count" and v <= len(seq):
            r, seq = r.count(v), seq[:v]
            lo, hi = (min(seq), max(seq)) if seq else (1, 0)
        elif op == "align":
            r, seq = r.align(v), _oracle_seq(lo, hi, stride, v)
    assert list(r) == seq


@pytest.mark.criterion(8, "runtime property suite")
def test_c8_runtime_properties():
    _range_cases()
    with pool_session(4):
        rng = random.Random(8)
        for _ in range(20):
            lo, n = rng.randint(-100, 100), rng.randint(0, 2000)
            r = Range(lo, lo + n - 1).by(rng.choice([1, 2, -3]))
            par, seq = np.zeros(r.size), np.zeros(r.size)
            forall(r, lambda i: par.__setitem__(r.index_of(i), i * 0.5 + 1))
            for i in r:
                seq[r.index_of(i)] = i * 0.5 + 1
            assert np.array_equal(par, seq)

        for n in (1, 7, 100):
            entered = Atomic(0)
            coforall(Range(1, n), lambda i: entered.add(1))
            assert entered.read() == n

        s, got, lock = Sync(), [], threading.Lock()

        def role(t):
            if t < 4:
                for v in range(t, 1000, 4):
                    s.write_ef(v)
            else:
                mine = [s.read_fe() for _ in range(250)]
                with lock:
                    got.extend(mine)
        coforall(Range(0, 7), role)
        assert sorted(got) == list(range(1000)) and s.transitions == 2000

        values = [rng.randrange(-(1 << 63), 1 << 63) for _ in range(10 ** 5)]
        assert list(parallel_quicksort(values)) == sorted(values)


def _fma_seconds(workers, x, reps=20):
    impl = kernels.active
    with pool_session(workers):
        t0 = time.perf_counter()
        for _ in range(reps):
            forall_blocks(len(x), lambda lo, hi: impl.fma_sweep(x, lo, hi, 1.0000001, 1e-9, 1))
        return time.perf_counter() - t0


@pytest.mark.criterion(9, "scaling smoke test")
def test_c9_scaling():
    cores = os.cpu_count() or 1
    if cores < 4:
        pytest.skip(f"needs a host with at least 4 cores, this one has {cores}")
    x = np.random.default_rng(9).random(10 ** 7)
    ratios = []
    for _ in range(3):
        one, four = _fma_seconds(1, x), _fma_seconds(4, x)
        ratios.append(four / one)
        if ratios[-1] <= 0.7:
            break
    assert min(ratios) <= 0.7, ratios


@pytest.mark.criterion(10, "COCOMO unit checks")
def test_c10_cocomo():
    import mpmath
    mpmath.mp.dps = 50
    assert cocomo_effort(0) == 0 and cocomo_schedule(cocomo_effort(0)) == 0
    assert cocomo_effort(1) == pytest.approx(2.4, rel=1e-15)
    oracle = mpmath.mpf("2.5") * mpmath.mpf("2.4") ** mpmath.mpf("0.38")
    assert abs(cocomo_schedule(2.4) - float(oracle)) / float(oracle) <= 1e-6
