"""Atomic, sync and single variables."""

from __future__ import annotations

import threading

from . import pool as _pool

_MASK = (1 << 64) - 1


def wrap64(x: int) -> int:
    """Reduce an integer to the signed 64-bit range (two's complement wrap)."""
    x &= _MASK
    return x - (1 << 64) if x >> 63 else x


class Atomic:
    """A 64-bit integer or boolean with linearizable read-modify-write operations."""

    __slots__ = ("_value", "_lock", "_kind")

    def __init__(self, value=0, kind=int):
        if kind not in (int, bool):
            raise TypeError("atomic variables hold int or bool")
        self._kind = kind
        self._value = self._coerce(value)
        self._lock = threading.Lock()

    def _coerce(self, v):
        return bool(v) if self._kind is bool else wrap64(int(v))

    def read(self):
        return self._value

    def write(self, v):
        v = self._coerce(v)
        with self._lock:
            self._value = v

    def exchange(self, v):
        v = self._coerce(v)
        with self._lock:
            old, self._value = self._value, v
        return old

    def compare_exchange(self, expected, desired) -> bool:
        desired = self._coerce(desired)
        with self._lock:
            if self._value != expected:
                return False
            self._value = desired
            return True

    def _rmw(self, fn, v):
        if self._kind is bool:
            raise TypeError("arithmetic on an atomic bool")
        v = int(v)
        with self._lock:
            old = self._value
            self._value = wrap64(fn(old, v))
        return old

    def fetch_add(self, v):
        return self._rmw(lambda a, b: a + b, v)

    def fetch_sub(self, v):
        return self._rmw(lambda a, b: a - b, v)

    def fetch_xor(self, v):
        return self._rmw(lambda a, b: a ^ b, v)

    def fetch_and(self, v):
        return self._rmw(lambda a, b: a & b, v)

    def fetch_or(self, v):
        return self._rmw(lambda a, b: a | b, v)

    def add(self, v):
        self.fetch_add(v)

    def sub(self, v):
        self.fetch_sub(v)

    def xor(self, v):
        self.fetch_xor(v)

    def and_(self, v):
        self.fetch_and(v)

    def or_(self, v):
        self.fetch_or(v)

    def test_and_set(self) -> bool:
        with self._lock:
            old, self._value = self._value, True if self._kind is bool else 1
        return bool(old)

    def clear(self):
        self.write(0)

    def wait_for(self, v):
        """Spin (yielding the GIL) until the value equals *v*."""
        import time
        while self._value != v:
            time.sleep(0)

    def __repr__(self):
        return f"Atomic({self._value!r})"

    def __str__(self):
        return str(self._value)


class Sync:
    """A slot with a full/empty bit.

    ``write_ef`` waits for empty and fills; ``read_fe`` waits for full and
    empties.  Waiting inside a pool worker lets the pool start a spare worker
    so other tasks keep running.
    """

    _EMPTY = object()

    def __init__(self, value=_EMPTY):
        self._value = value
        self._full = value is not Sync._EMPTY
        self._cv = threading.Condition(threading.Lock())
        self.transitions = 0

    @property
    def is_full(self) -> bool:
        return self._full

    def _wait(self, want_full: bool):
        if self._full == want_full:
            return
        with _pool.blocking_region():
            while self._full != want_full:
                self._cv.wait()

    def write_ef(self, v):
        with self._cv:
            self._wait(False)
            self._value, self._full = v, True
            self.transitions += 1
            self._cv.notify_all()

    def read_fe(self):
        with self._cv:
            self._wait(True)
            v, self._value, self._full = self._value, Sync._EMPTY, False
            self.transitions += 1
            self._cv.notify_all()
        return v

    def read_ff(self):
        with self._cv:
            self._wait(True)
            return self._value

    def read_xx(self):
        with self._cv:
            return None if not self._full else self._value

    def write_xf(self, v):
        with self._cv:
            self._value, self._full = v, True
            self._cv.notify_all()

    def write_ff(self, v):
        with self._cv:
            self._wait(True)
            self._value = v
            self._cv.notify_all()

    def reset(self):
        with self._cv:
            self._value, self._full = Sync._EMPTY, False
            self._cv.notify_all()


class SingleWriteError(RuntimeError):
    pass


class Single:
    """A write-once slot; reads wait for the write and never block afterwards."""

    _EMPTY = object()

    def __init__(self, value=_EMPTY):
        self._value = value
        self._cv = threading.Condition(threading.Lock())

    @property
    def is_full(self) -> bool:
        return self._value is not Single._EMPTY

    def write_ef(self, v):
        with self._cv:
            if self._value is not Single._EMPTY:
                raise SingleWriteError("single variable written twice")
            self._value = v
            self._cv.notify_all()

    def read_ff(self):
        if self._value is not Single._EMPTY:
            return self._value
        with self._cv:
            if self._value is Single._EMPTY:
                with _pool.blocking_region():
                    while self._value is Single._EMPTY:
                        self._cv.wait()
            return self._value

    read_fe = read_ff
