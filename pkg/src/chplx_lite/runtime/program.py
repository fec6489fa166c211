"""Program-level support for generated code: entry point, config consts, output."""

from __future__ import annotations

import math
import sys
import threading
import time
from math import sqrt  # noqa: F401  (re-exported for generated code)

from . import parallel, pool
from .sync import wrap64

# ---------------------------------------------------------------- locale


class Locale:
    """The single locale of a shared-memory run."""

    id = 0

    @property
    def max_task_par(self) -> int:
        return pool.worker_count()

    @property
    def num_pus(self) -> int:
        return pool.worker_count()

    def __str__(self):
        return "LOCALE0"


here = Locale()
Locales = (here,)

# ---------------------------------------------------------------- integers


def idiv(a, b):
    """Chapel integer division: truncates toward zero."""
    if isinstance(a, float) or isinstance(b, float):
        return a / b
    q = abs(a) // abs(b)
    return wrap64(q if (a >= 0) == (b > 0) else -q)


def imod(a, b):
    """Chapel integer remainder: takes the sign of the dividend."""
    if isinstance(a, float) or isinstance(b, float):
        return math.fmod(a, b)
    return a - b * idiv(a, b)


def shl(a: int, n: int) -> int:
    """Left shift wrapped to a signed 64-bit result."""
    return wrap64(a << n)


def lshr(a: int, n: int) -> int:
    """Logical (unsigned) right shift of a 64-bit value."""
    return wrap64((a & 0xFFFFFFFFFFFFFFFF) >> n)

# ---------------------------------------------------------------- output


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        return "(" + ", ".join(format_value(x) for x in v) + ")"
    if hasattr(v, "item") and not hasattr(v, "domain"):
        return format_value(v.item())  # numpy scalar
    return str(v)


_out_lock = threading.Lock()


def writeln(*args):
    """Print the arguments with no separator, then a newline."""
    text = "".join(format_value(a) for a in args) + "\n"
    with _out_lock:
        sys.stdout.write(text)


def write(*args):
    with _out_lock:
        sys.stdout.write("".join(format_value(a) for a in args))

# ---------------------------------------------------------------- timing


def now_ns() -> int:
    """Monotonic wall-clock time in nanoseconds."""
    return time.perf_counter_ns()


class Timer:
    """Stopwatch accumulating elapsed wall time across start/stop pairs."""

    def __init__(self):
        self._start = None
        self._total = 0

    def start(self):
        self._start = now_ns()

    def stop(self):
        if self._start is not None:
            self._total += now_ns() - self._start
            self._start = None

    def clear(self):
        self._start, self._total = None, 0

    def elapsed(self) -> float:
        """Seconds, including a running interval."""
        running = now_ns() - self._start if self._start is not None else 0
        return (self._total + running) / 1e9

# ---------------------------------------------------------------- config consts

_config_values: dict[str, str] = {}


def _parse_value(text: str, default, typ):
    typ = typ or type(default)
    if typ is bool:
        low = text.lower()
        if low not in ("true", "false"):
            raise ValueError(f"expected true or false, got {text!r}")
        return low == "true"
    if typ is int:
        return int(text.replace("_", ""), 0)
    if typ is float:
        return float(text)
    return text


def config_const(name: str, default, typ=None):
    """Value of config const *name*: the ``--name=value`` argument or *default*."""
    if name in _config_values:
        try:
            return _parse_value(_config_values[name], default, typ)
        except ValueError as exc:
            raise ValueError(f"bad value for --{name}: {exc}") from None
    return default


class UsageError(Exception):
    pass


def parse_program_args(argv, configs=()) -> tuple[dict[str, str], int | None]:
    values, threads = {}, None
    for arg in argv:
        if not arg.startswith("--") or "=" not in arg:
            raise UsageError(f"expected --name=value, got {arg!r}")
        name, _, text = arg[2:].partition("=")
        if name == "threads":
            try:
                threads = int(text)
            except ValueError:
                raise UsageError(f"bad thread count {text!r}") from None
            if threads < 1:
                raise UsageError("thread count must be positive")
        elif name in configs:
            values[name] = text
        else:
            raise UsageError(f"unknown option --{name}")
    return values, threads


def run_program(main, argv=None, configs=()) -> int:
    """Entry point of a generated program.

    Parses ``--threads=N`` and ``--<config>=<value>``, starts the worker
    pool, runs *main*, waits for tasks started with ``begin`` and shuts the
    pool down.  Returns the process exit status.
    """
    if argv is None:
        argv = sys.argv[1:]
    try:
        values, threads = parse_program_args(argv, configs)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    _config_values.clear()
    _config_values.update(values)
    pool.init(threads)
    try:
        main()
        parallel.wait_outstanding()
    finally:
        pool.shutdown()
        _config_values.clear()
        sys.stdout.flush()
    return 0
