"""forall, coforall, begin, cobegin and zip over the worker pool."""

from __future__ import annotations

import builtins
import itertools
import threading

from .pool import TaskGroup, get_pool
from .ranges import Domain, Range


class Zipped:
    """Lock-step iteration over several iterables of one common length.

    Lengths are checked when the object is built, before any iteration.
    Ranges bounded only at their starting end may take part; they follow the
    length of the bounded members.
    """

    def __init__(self, *iterables):
        if not iterables:
            raise ValueError("zip needs at least one iterable")
        self.parts = tuple(_materialize(it) for it in iterables)
        sizes = {len(p) for p in self.parts if not _open_ended(p)}
        if not sizes:
            raise ValueError("zip needs at least one bounded iterable")
        if len(sizes) > 1:
            raise ValueError(f"zipped iterables have different lengths: {sorted(sizes)}")
        self._size = sizes.pop()

    def __len__(self):
        return self._size

    def __iter__(self):
        return self._chunk(0, self._size)

    def _chunk(self, start: int, stop: int):
        iters = []
        for p in self.parts:
            if _open_ended(p):
                first = p.first + start * p.stride
                iters.append(itertools.count(first, p.stride))
            else:
                iters.append(_chunk(p, start, stop))
        return builtins.zip(*iters) if stop > start else iter(())


def zip(*iterables) -> Zipped:
    return Zipped(*iterables)


def _open_ended(p) -> bool:
    return isinstance(p, Range) and not p.is_bounded


def _materialize(it):
    """Return something with len() and positional chunking."""
    if isinstance(it, (Range, Domain, Zipped, list, tuple, range)):
        return it
    if hasattr(it, "_chunk") and hasattr(it, "__len__"):
        return it
    return list(it)


def _chunk(items, start: int, stop: int):
    if isinstance(items, (list, tuple, range)):
        return iter(items[start:stop])
    return items._chunk(start, stop)


def _run_chunk(items, start, stop, body, star):
    if star:
        for idx in _chunk(items, start, stop):
            body(*idx)
    else:
        for idx in _chunk(items, start, stop):
            body(idx)


def forall(iterable, body=None, *, star: bool = False):
    """Data-parallel loop: *body* runs once per index.

    The index space is split into ``min(workers, size)`` contiguous chunks,
    each run as one task; the call returns after all chunks finish and
    re-raises the first error.  Without *body* it returns a decorator that
    runs the loop immediately, which is how generated code calls it.
    ``star=True`` unpacks tuple indices into positional arguments.
    """
    if body is None:
        def run(fn):
            forall(iterable, fn, star=star)
            return fn
        return run
    items = _materialize(iterable)
    n = len(items)
    if n == 0:
        return
    pool = get_pool()
    k = min(pool.workers, n)
    group = TaskGroup(pool)
    for c in range(k):
        group.spawn(_run_chunk, items, c * n // k, (c + 1) * n // k, body, star)
    group.join()


def forall_blocks(n: int, fn) -> None:
    """Split positions ``0..n-1`` like :func:`forall` and call ``fn(start, stop)`` per block."""
    if n <= 0:
        return
    pool = get_pool()
    k = min(pool.workers, n)
    group = TaskGroup(pool)
    for c in range(k):
        group.spawn(fn, c * n // k, (c + 1) * n // k)
    group.join()


def coforall(iterable, body=None, *, star: bool = False):
    """Task-parallel loop: exactly one task per index, joined before returning."""
    if body is None:
        def run(fn):
            coforall(iterable, fn, star=star)
            return fn
        return run
    if isinstance(iterable, Range) and not iterable.is_bounded:
        raise ValueError("coforall needs a bounded iterable")
    pool = get_pool()
    group = TaskGroup(pool)
    for idx in iterable:
        if star:
            group.spawn(body, *idx)
        else:
            group.spawn(body, idx)
    group.join()


class TaskHandle:
    def __init__(self, group: TaskGroup):
        self._group = group

    @property
    def done(self) -> bool:
        return self._group.done

    def join(self):
        self._group.join()


_outstanding: list[TaskHandle] = []
_outstanding_lock = threading.Lock()


def begin(fn) -> TaskHandle:
    """Run *fn* asynchronously.  Usable as a decorator."""
    group = TaskGroup(get_pool())
    group.spawn(fn)
    handle = TaskHandle(group)
    with _outstanding_lock:
        _outstanding.append(handle)
    return handle


def wait_outstanding():
    """Join every task started with :func:`begin` so far (program exit)."""
    first = None
    while True:
        with _outstanding_lock:
            if not _outstanding:
                break
            handles = list(_outstanding)
            _outstanding.clear()
        for h in handles:
            try:
                h.join()
            except BaseException as exc:
                first = first or exc
    if first is not None:
        raise first


def cobegin(*fns):
    """Run each function as its own task and join them all."""
    group = TaskGroup(get_pool())
    for fn in fns:
        group.spawn(fn)
    group.join()
