import os
import subprocess
import sys
from pathlib import Path

import pytest

from chplx_lite.bench import chapel_source
from chplx_lite.codegen import CodegenProfile, compile_files

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def compile_to(out_dir, *inputs, profile=None, emit_build=False, dumps=()):
    return compile_files([str(p) for p in inputs], out_dir, profile or CodegenProfile(),
                         emit_build=emit_build, dumps=dumps)


def run_generated(out_dir, stem, *args, timeout=120):
    """Run ``<stem>_main.py`` in *out_dir*; returns the CompletedProcess."""
    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join([str(out_dir), env.get("PYTHONPATH", "")])
    return subprocess.run([sys.executable, "-O", f"{stem}_main.py", *args], cwd=out_dir,
                          capture_output=True, text=True, timeout=timeout, env=env)


@pytest.fixture(scope="session")
def bench_build(tmp_path_factory):
    """The three benchmark sources compiled once, trailing directive style."""
    out = tmp_path_factory.mktemp("bench")
    compile_to(out, *(chapel_source(b) for b in ("heat", "stream", "gups")),
               profile=CodegenProfile(placement="trailing"))
    return out


# -- acceptance reporting: one line per criterion ---------------------------

def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (rep.when == "call" or rep.failed or rep.skipped):
        return
    number, title = mark.args
    if rep.skipped:
        verdict = "SKIP (%s)" % (rep.longrepr[2] if isinstance(rep.longrepr, tuple) else "")
    else:
        verdict = "FAIL" if rep.failed else "PASS"
    prev = item.config._criteria.get(number)
    if prev is None or prev[1] == "PASS":
        item.config._criteria[number] = (title, verdict)


def pytest_terminal_summary(terminalreporter, config):
    if not config._criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(config._criteria):
        title, verdict = config._criteria[number]
        terminalreporter.write_line(f"criterion {number:>2} {title}: {verdict}")
