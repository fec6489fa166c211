"""Fork-join worker pool with per-worker deques and work stealing.

Each worker owns a deque: it pushes and pops its own tasks at the tail and
other workers steal from the head.  Tasks submitted from outside the pool go
through a shared injection queue.  A worker waiting on a task group keeps
executing pending tasks instead of idling.

When a task blocks on a sync or single variable the pool starts a spare
worker so the remaining tasks keep making progress.  At most ``max_parked``
tasks are parked that way at once; past the budget a blocked task simply
holds its worker thread.
"""

from __future__ import annotations

import itertools
import os
import random
import threading
from collections import deque
from contextlib import contextmanager

DEFAULT_PARKED_BUDGET = 256

_tls = threading.local()


class TaskGroup:
    """Counts outstanding tasks of one construct and collects their errors."""

    def __init__(self, pool: "WorkerPool"):
        self.pool = pool
        self._pending = 0
        self._lock = threading.Lock()
        self._done = threading.Event()
        self._done.set()
        self.errors: list[BaseException] = []

    def spawn(self, fn, *args):
        with self._lock:
            self._pending += 1
            self._done.clear()
        self.pool.submit(_Task(fn, args, self))

    def _finished(self, exc: BaseException | None):
        with self._lock:
            if exc is not None:
                self.errors.append(exc)
            self._pending -= 1
            if self._pending == 0:
                self._done.set()

    @property
    def done(self) -> bool:
        return self._done.is_set()

    def wait(self, timeout=None) -> bool:
        return self._done.wait(timeout)

    def join(self):
        """Wait for every task, then re-raise the first error, if any."""
        self.pool.wait_group(self)
        if self.errors:
            raise self.errors[0]


class _Task:
    __slots__ = ("fn", "args", "group")

    def __init__(self, fn, args, group):
        self.fn = fn
        self.args = args
        self.group = group


class _Worker:
    def __init__(self, pool: "WorkerPool", wid: int):
        self.pool = pool
        self.id = wid
        self.deque: deque = deque()
        self.thread = threading.Thread(target=pool._worker_main, args=(self,),
                                       name=f"chplx-worker-{wid}", daemon=True)


class WorkerPool:
    def __init__(self, workers: int | None = None, max_parked: int = DEFAULT_PARKED_BUDGET):
        if workers is None:
            workers = os.cpu_count() or 1
        if workers < 1:
            raise ValueError("worker count must be positive")
        self.workers = workers
        self.max_parked = max_parked
        self._cv = threading.Condition(threading.Lock())
        self._injection: deque = deque()
        self._all: tuple[_Worker, ...] = ()
        self._idle = 0
        self._parked = 0
        self._shutdown = False
        self._ids = itertools.count()
        self.tasks_spawned = 0
        self.spares_started = 0
        self.peak_parked = 0
        with self._cv:
            for _ in range(workers):
                self._start_worker()

    def _start_worker(self):
        # caller holds self._cv
        w = _Worker(self, next(self._ids))
        self._all = self._all + (w,)
        w.thread.start()
        return w

    @property
    def live_workers(self) -> int:
        return len(self._all)

    # -- submission ------------------------------------------------------
    def submit(self, task: _Task):
        if self._shutdown:
            raise RuntimeError("worker pool is shut down")
        w = getattr(_tls, "worker", None)
        if w is not None and w.pool is self:
            w.deque.append(task)
        else:
            self._injection.append(task)
        with self._cv:
            self.tasks_spawned += 1
            if self._idle:
                self._cv.notify()

    def _find_task(self, w: _Worker | None):
        if w is not None:
            try:
                return w.deque.pop()
            except IndexError:
                pass
        try:
            return self._injection.popleft()
        except IndexError:
            pass
        victims = self._all
        if not victims:
            return None
        start = random.randrange(len(victims))
        for k in range(len(victims)):
            v = victims[(start + k) % len(victims)]
            if v is w:
                continue
            try:
                return v.deque.popleft()
            except IndexError:
                continue
        return None

    @staticmethod
    def _run(task: _Task):
        try:
            task.fn(*task.args)
        except BaseException as exc:  # propagated to whoever joins the group
            task.group._finished(exc)
        else:
            task.group._finished(None)

    # -- worker loop -----------------------------------------------------
    def _worker_main(self, w: _Worker):
        _tls.worker = w
        while True:
            task = self._find_task(w)
            if task is not None:
                self._run(task)
                continue
            with self._cv:
                if self._shutdown:
                    break
                if len(self._all) - self._parked > self.workers:
                    # a spare that is no longer needed
                    self._all = tuple(x for x in self._all if x is not w)
                    break
                self._idle += 1
                task = self._find_task(w)
                if task is None:
                    self._cv.wait(0.05)
                self._idle -= 1
            if task is not None:
                self._run(task)
        _tls.worker = None

    # -- joining and blocking --------------------------------------------
    def wait_group(self, group: TaskGroup):
        w = getattr(_tls, "worker", None)
        if w is None or w.pool is not self:
            group.wait()
            return
        while not group.done:
            task = self._find_task(w)
            if task is not None:
                self._run(task)
                continue
            with self.parked():
                while not group.wait(0.01):
                    if w.deque or self._injection:
                        break
                else:
                    return

    @contextmanager
    def parked(self):
        """Mark the current worker as blocked; start a spare if within budget."""
        with self._cv:
            self._parked += 1
            self.peak_parked = max(self.peak_parked, self._parked)
            if self._parked <= self.max_parked and \
                    len(self._all) - self._parked < self.workers and not self._shutdown:
                self._start_worker()
                self.spares_started += 1
        try:
            yield
        finally:
            with self._cv:
                self._parked -= 1

    def shutdown(self):
        with self._cv:
            self._shutdown = True
            self._cv.notify_all()
            threads = [w.thread for w in self._all]
        me = threading.current_thread()
        for t in threads:
            if t is not me:
                t.join()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.shutdown()


_current: WorkerPool | None = None
_current_lock = threading.Lock()


def init(workers: int | None = None, max_parked: int = DEFAULT_PARKED_BUDGET) -> WorkerPool:
    """Start (or restart with a new size) the process-wide pool."""
    global _current
    with _current_lock:
        if _current is not None:
            _current.shutdown()
        _current = WorkerPool(workers, max_parked)
        return _current


def shutdown():
    global _current
    with _current_lock:
        if _current is not None:
            _current.shutdown()
            _current = None


def get_pool() -> WorkerPool:
    global _current
    pool = _current
    if pool is None:
        with _current_lock:
            if _current is None:
                _current = WorkerPool()
            pool = _current
    return pool


def worker_count() -> int:
    return get_pool().workers


def current_worker_id() -> int | None:
    w = getattr(_tls, "worker", None)
    return None if w is None else w.id


@contextmanager
def blocking_region():
    """Wrap a potentially long wait; compensates only inside pool workers."""
    w = getattr(_tls, "worker", None)
    if w is None:
        yield
        return
    with w.pool.parked():
        yield


@contextmanager
def pool_session(workers: int | None = None):
    """Run a block with a fresh pool of *workers* threads, then shut it down."""
    init(workers)
    try:
        yield get_pool()
    finally:
        shutdown()
