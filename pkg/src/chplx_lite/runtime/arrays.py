"""Dense arrays over rectangular domains."""

from __future__ import annotations

import threading

import numpy as np

from .ranges import Domain, Range
from .sync import wrap64

_DTYPES = {int: np.int64, float: np.float64, bool: np.bool_, complex: np.complex128,
           str: object}


def _as_domain(d) -> Domain:
    if isinstance(d, Domain):
        return d
    if isinstance(d, (tuple, list)):
        return Domain(*d)
    return Domain(d)


class Array:
    """Row-major storage for one element per domain index.

    ``data`` is the flat numpy buffer; kernels operate on it directly.
    Indexing outside the domain raises IndexError.
    """

    def __init__(self, domain, elt_type=float, init=None):
        self.domain = _as_domain(domain)
        self.elt_type = elt_type
        self.data = np.zeros(self.domain.size, dtype=_DTYPES.get(elt_type, object))
        # rank-1 unit-stride fast path
        d0 = self.domain.dims[0]
        self._fast = self.domain.rank == 1 and d0.stride == 1
        self._base = d0.first if self._fast and d0.size else 0
        self._n = self.domain.size
        if init is not None:
            self[...] = init

    @classmethod
    def from_values(cls, values, elt_type=None, low: int = 0) -> "Array":
        values = list(values)
        if elt_type is None:
            elt_type = type(values[0]) if values else float
        a = cls(Range(low, low + len(values) - 1), elt_type)
        a.data[:] = values
        return a

    def _offset(self, idx) -> int:
        if self._fast and type(idx) is int:
            off = idx - self._base
            if 0 <= off < self._n:
                return off
            raise IndexError(f"index {idx} is out of bounds for domain {self.domain}")
        return self.domain.offset(idx)

    def __getitem__(self, idx):
        if idx is Ellipsis:
            return self
        return self.data.item(self._offset(idx))

    def __setitem__(self, idx, value):
        if idx is Ellipsis:
            self.assign(value)
            return
        self.data[self._offset(idx)] = value

    def assign(self, value):
        """Whole-array assignment from a scalar, an array or any sized iterable."""
        if isinstance(value, Array):
            if value.domain.size != self.domain.size:
                raise ValueError("array assignment between different sizes")
            self.data[:] = value.data
        elif isinstance(value, (Range, Domain, list, tuple, np.ndarray)) or \
                hasattr(value, "__iter__") and not isinstance(value, str):
            values = list(value)
            if len(values) != self._n:
                raise ValueError(f"cannot assign {len(values)} values to an array "
                                 f"of size {self._n}")
            self.data[:] = values
        else:
            self.data[:] = value

    @property
    def size(self) -> int:
        return self._n

    def __len__(self):
        return self._n

    @property
    def shape(self):
        return self.domain.shape

    def __iter__(self):
        return iter(self.data.tolist())

    def _chunk(self, start: int, stop: int):
        return iter(self.data[start:stop].tolist())

    def swap(self, other: "Array"):
        """Exchange contents with *other* (same size) without copying."""
        if not isinstance(other, Array) or other.size != self.size:
            raise ValueError("swap needs two arrays of the same size")
        self.data, other.data = other.data, self.data

    def copy(self) -> "Array":
        out = Array(self.domain, self.elt_type)
        out.data[:] = self.data
        return out

    def to_numpy(self) -> np.ndarray:
        return self.data.reshape(self.domain.shape)

    def equals(self, other) -> bool:
        return isinstance(other, Array) and self.domain == other.domain and \
            bool(np.array_equal(self.data, other.data))

    def __str__(self):
        from .program import format_value
        if self.domain.rank == 1:
            return " ".join(format_value(v) for v in self)
        rows = self.to_numpy().reshape(-1, self.domain.shape[-1]).tolist()
        return "\n".join(" ".join(format_value(v) for v in row) for row in rows)

    def __repr__(self):
        return f"Array({self.domain}, {self.data!r})"


class AtomicRef:
    """Handle to one element of an :class:`AtomicArray`."""

    __slots__ = ("_arr", "_off")

    def __init__(self, arr: "AtomicArray", off: int):
        self._arr = arr
        self._off = off

    def _rmw(self, fn, v):
        arr, off = self._arr, self._off
        with arr._locks[off % len(arr._locks)]:
            old = int(arr.data[off])
            arr.data[off] = wrap64(fn(old, int(v)))
        return old

    def read(self):
        return int(self._arr.data[self._off])

    def write(self, v):
        with self._arr._locks[self._off % len(self._arr._locks)]:
            self._arr.data[self._off] = wrap64(int(v))

    def exchange(self, v):
        return self._rmw(lambda a, b: b, v)

    def compare_exchange(self, expected, desired) -> bool:
        arr, off = self._arr, self._off
        with arr._locks[off % len(arr._locks)]:
            if int(arr.data[off]) != expected:
                return False
            arr.data[off] = wrap64(int(desired))
            return True

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


class AtomicArray(Array):
    """Array of atomic 64-bit integers guarded by striped locks.

    Element reads return a handle with the atomic methods; whole-array
    operations act on the plain ``data`` buffer.
    """

    STRIPES = 64

    def __init__(self, domain, init=None):
        self._locks = [threading.Lock() for _ in range(self.STRIPES)]
        super().__init__(domain, int, init)

    def __getitem__(self, idx):
        if idx is Ellipsis:
            return self
        return AtomicRef(self, self._offset(idx))

    def __setitem__(self, idx, value):
        if idx is Ellipsis:
            self.assign(value)
            return
        AtomicRef(self, self._offset(idx)).write(value)


def make_array(domain, elt_type=float, init=None) -> Array:
    """Array factory used by generated code (``atomic`` picks :class:`AtomicArray`)."""
    if elt_type == "atomic":
        return AtomicArray(domain, init)
    return Array(domain, elt_type, init)
