"""Chapel ranges and rectangular domains."""

from __future__ import annotations

import itertools
import operator


def _sign(x: int) -> int:
    return 1 if x > 0 else -1


class Range:
    """An integer range ``low..high by stride align alignment``.

    Either bound may be ``None`` (unbounded).  ``alignment`` is any index the
    enumerated sequence is congruent to modulo ``|stride|``; when omitted the
    range is aligned at ``low`` for positive strides and ``high`` for negative
    ones.
    """

    __slots__ = ("low", "high", "stride", "alignment")

    def __init__(self, low: int | None = None, high: int | None = None,
                 stride: int = 1, alignment: int | None = None):
        stride = operator.index(stride)
        if stride == 0:
            raise ValueError("range stride must be nonzero")
        self.low = None if low is None else operator.index(low)
        self.high = None if high is None else operator.index(high)
        self.stride = stride
        self.alignment = None if alignment is None else operator.index(alignment)

    # -- classification -------------------------------------------------
    @property
    def boundedness(self) -> str:
        if self.low is not None and self.high is not None:
            return "bounded"
        if self.low is not None:
            return "boundedLow"
        if self.high is not None:
            return "boundedHigh"
        return "unbounded"

    @property
    def is_bounded(self) -> bool:
        return self.low is not None and self.high is not None

    def _anchor(self) -> int | None:
        if self.alignment is not None:
            return self.alignment
        return self.low if self.stride > 0 else self.high

    @property
    def aligned(self) -> bool:
        return self._anchor() is not None

    # -- first / last / size --------------------------------------------
    @property
    def first(self) -> int:
        a = self._anchor()
        s = abs(self.stride)
        if self.stride > 0:
            if self.low is None or a is None:
                raise ValueError(f"range {self} has no first index")
            return self.low + (a - self.low) % s
        if self.high is None or a is None:
            raise ValueError(f"range {self} has no first index")
        return self.high - (self.high - a) % s

    @property
    def last(self) -> int:
        a = self._anchor()
        s = abs(self.stride)
        if self.stride > 0:
            if self.high is None or a is None:
                raise ValueError(f"range {self} has no last index")
            return self.high - (self.high - a) % s
        if self.low is None or a is None:
            raise ValueError(f"range {self} has no last index")
        return self.low + (a - self.low) % s

    @property
    def size(self) -> int:
        if not self.is_bounded:
            raise ValueError(f"size of unbounded range {self}")
        first, last = self.first, self.last
        if (last - first) * self.stride < 0:
            return 0
        return (last - first) // self.stride + 1

    def __len__(self):
        return self.size

    def is_empty(self) -> bool:
        return self.size == 0

    def as_pyrange(self) -> range:
        if self.size == 0:
            return range(0)
        return range(self.first, self.last + _sign(self.stride), self.stride)

    def __iter__(self):
        if not self.is_bounded:
            raise ValueError(f"cannot iterate over unbounded range {self}; "
                             "use # or zip it with a bounded iterable")
        return iter(self.as_pyrange())

    def iter_unbounded(self):
        """Enumerate a range bounded only at its starting end."""
        if self.is_bounded:
            return iter(self)
        return itertools.count(self.first, self.stride)

    def _chunk(self, start: int, stop: int):
        return iter(self.as_pyrange()[start:stop])

    # -- the #, by and align operators -----------------------------------
    def by(self, step: int) -> "Range":
        step = operator.index(step)
        if step == 0:
            raise ValueError("'by' step must be nonzero")
        # the new sequence starts where the old one did, or at its end when reversing
        try:
            anchor = self.first if step > 0 else self.last
        except ValueError:
            anchor = self.alignment
        if abs(self.stride) == 1 and self.alignment is None:
            natural_end = self.low if self.stride * step > 0 else self.high
            if anchor == natural_end:
                anchor = None
        return Range(self.low, self.high, self.stride * step, anchor)

    def count(self, n: int) -> "Range":
        n = operator.index(n)
        if n < 0:
            raise ValueError("negative counts are not supported")
        if self.is_bounded and n > self.size:
            raise ValueError(f"cannot take {n} indices from {self} of size {self.size}")
        first = self.first
        step = self.stride
        if n == 0:
            low, high = (first, first - 1) if step > 0 else (first + 1, first)
        elif step > 0:
            low, high = first, first + (n - 1) * step
        else:
            low, high = first + (n - 1) * step, first
        alignment = None if abs(step) == 1 and self.alignment is None else first
        return Range(low, high, step, alignment)

    def align(self, a: int) -> "Range":
        return Range(self.low, self.high, self.stride, operator.index(a))

    __mod__ = None  # ranges have no % operator

    # -- queries and arithmetic ------------------------------------------
    def __contains__(self, i) -> bool:
        if self.low is not None and i < self.low:
            return False
        if self.high is not None and i > self.high:
            return False
        a = self._anchor()
        return a is None or (i - a) % abs(self.stride) == 0

    def index_of(self, i: int) -> int:
        """Position of index *i* in the enumerated sequence."""
        if not self.is_bounded:
            raise ValueError(f"positions of unbounded range {self}")
        pos, rem = divmod(i - self.first, self.stride)
        if rem or not 0 <= pos < self.size:
            raise IndexError(f"index {i} is out of bounds for {self}")
        return pos

    def __getitem__(self, key):
        if isinstance(key, Range):
            return self.slice(key)
        if isinstance(key, slice):
            sub = self.as_pyrange()[key]
            if len(sub) == 0:
                return Range(self.first, self.first - 1) if self.stride > 0 else \
                    Range(self.first + 1, self.first)
            lo, hi = min(sub[0], sub[-1]), max(sub[0], sub[-1])
            return Range(lo, hi, sub.step, sub[0])
        n = self.size
        k = operator.index(key)
        if not 0 <= k < n:
            raise IndexError(f"position {k} is out of bounds for {self}")
        return self.first + k * self.stride

    def slice(self, other: "Range") -> "Range":
        """Indices of self that also fall within the bounds of *other*."""
        lows = [b for b in (self.low, other.low) if b is not None]
        highs = [b for b in (self.high, other.high) if b is not None]
        anchor = self._anchor()
        return Range(max(lows) if lows else None, min(highs) if highs else None,
                     self.stride, anchor)

    def _shift(self, k: int) -> "Range":
        k = operator.index(k)
        return Range(None if self.low is None else self.low + k,
                     None if self.high is None else self.high + k,
                     self.stride,
                     None if self.alignment is None else self.alignment + k)

    def __add__(self, k):
        if isinstance(k, Range):
            return NotImplemented
        return self._shift(k)

    __radd__ = __add__

    def __sub__(self, k):
        return self._shift(-operator.index(k))

    def __eq__(self, other):
        if not isinstance(other, Range):
            return NotImplemented
        if self.is_bounded and other.is_bounded:
            if self.size == 0 or other.size == 0:
                return self.size == other.size
            return (self.first, self.stride, self.size) == (other.first, other.stride, other.size)
        return (self.low, self.high, self.stride, self._anchor()) == \
            (other.low, other.high, other.stride, other._anchor())

    def __hash__(self):
        if self.is_bounded:
            return hash(("Range", self.first if self.size else None, self.stride, self.size))
        return hash(("Range", self.low, self.high, self.stride))

    def __str__(self):
        text = f"{'' if self.low is None else self.low}..{'' if self.high is None else self.high}"
        if self.stride != 1:
            text += f" by {self.stride}"
        if self.alignment is not None:
            text += f" align {self.alignment}"
        return text

    def __repr__(self):
        return f"Range({self})"


def count(r: Range, n: int) -> Range:
    """The ``#`` operator."""
    return r.count(n)


def by(r: Range, step: int) -> Range:
    return r.by(step)


def align(r: Range, a: int) -> Range:
    return r.align(a)


def _as_range(d) -> Range:
    if isinstance(d, Range):
        if not d.is_bounded:
            raise ValueError(f"domain dimensions must be bounded, got {d}")
        return d
    n = operator.index(d)
    return Range(0, n - 1)


class Domain:
    """A rectangular index set: the cross product of bounded ranges.

    Iteration is row-major (last dimension varies fastest).  Rank-1 domains
    yield plain integers, higher ranks yield tuples.
    """

    __slots__ = ("dims", "_sizes", "_strides")

    def __init__(self, *dims):
        if len(dims) == 1 and isinstance(dims[0], (tuple, list)):
            dims = tuple(dims[0])
        if not dims:
            raise ValueError("a domain needs at least one dimension")
        self.dims = tuple(_as_range(d) for d in dims)
        self._sizes = tuple(d.size for d in self.dims)
        strides, acc = [], 1
        for n in reversed(self._sizes):
            strides.append(acc)
            acc *= n
        self._strides = tuple(reversed(strides))

    @property
    def rank(self) -> int:
        return len(self.dims)

    @property
    def shape(self) -> tuple[int, ...]:
        return self._sizes

    @property
    def size(self) -> int:
        total = 1
        for n in self._sizes:
            total *= n
        return total

    def __len__(self):
        return self.size

    def dim(self, i: int) -> Range:
        return self.dims[i]

    @property
    def low(self):
        lows = tuple(d.first for d in self.dims)
        return lows[0] if self.rank == 1 else lows

    @property
    def high(self):
        highs = tuple(d.last for d in self.dims)
        return highs[0] if self.rank == 1 else highs

    def __iter__(self):
        if self.rank == 1:
            return iter(self.dims[0])
        return itertools.product(*self.dims)

    def _chunk(self, start: int, stop: int):
        if self.rank == 1:
            return self.dims[0]._chunk(start, stop)
        return (self.index_at(p) for p in range(start, stop))

    def offset(self, idx) -> int:
        """Row-major storage position of *idx*; IndexError outside the domain."""
        if self.rank == 1:
            if isinstance(idx, tuple):
                if len(idx) != 1:
                    raise IndexError(f"rank-1 domain indexed with {idx}")
                idx = idx[0]
            return self.dims[0].index_of(idx)
        if not isinstance(idx, tuple) or len(idx) != self.rank:
            raise IndexError(f"rank-{self.rank} domain indexed with {idx!r}")
        pos = 0
        for d, i, st in zip(self.dims, idx, self._strides):
            pos += d.index_of(i) * st
        return pos

    def index_at(self, pos: int):
        if not 0 <= pos < self.size:
            raise IndexError(f"position {pos} outside domain of size {self.size}")
        if self.rank == 1:
            return self.dims[0][pos]
        out = []
        for d, st in zip(self.dims, self._strides):
            k, pos = divmod(pos, st)
            out.append(d[k])
        return tuple(out)

    def __contains__(self, idx) -> bool:
        try:
            self.offset(idx)
        except IndexError:
            return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented
        return self.dims == other.dims

    def __hash__(self):
        return hash(("Domain", self.dims))

    def __str__(self):
        return "{" + ", ".join(str(d) for d in self.dims) + "}"

    def __repr__(self):
        return f"Domain({self})"
