"""Runtime library for generated programs: Chapel ranges, domains, arrays,
synchronization variables and parallel loops on a work-stealing pool."""

from .arrays import Array, AtomicArray, AtomicRef, make_array
from .iterators import PullIterator, make_iter
from .parallel import (TaskHandle, Zipped, begin, cobegin, coforall, forall,
                       forall_blocks, wait_outstanding, zip)
from .pool import (TaskGroup, WorkerPool, blocking_region, current_worker_id, get_pool,
                   init, pool_session, shutdown, worker_count)
from .program import (Locale, Locales, Timer, config_const, format_value, here, idiv,
                      imod, lshr, now_ns, run_program, shl, sqrt, write, writeln)
from .quicksort import parallel_quicksort
from .ranges import Domain, Range, align, by, count
from .sync import Atomic, Single, SingleWriteError, Sync, wrap64

__all__ = [
    "Array", "AtomicArray", "AtomicRef", "make_array", "PullIterator", "make_iter",
    "TaskHandle", "Zipped", "begin", "cobegin", "coforall", "forall", "forall_blocks",
    "wait_outstanding", "zip", "TaskGroup", "WorkerPool", "blocking_region",
    "current_worker_id", "get_pool", "init", "pool_session", "shutdown", "worker_count",
    "Locale", "Locales", "Timer", "config_const", "format_value", "here", "idiv", "imod",
    "lshr", "now_ns", "run_program", "shl", "sqrt", "write", "writeln", "parallel_quicksort",
    "Domain", "Range", "align", "by", "count", "Atomic", "Single", "SingleWriteError",
    "Sync", "wrap64",
]
