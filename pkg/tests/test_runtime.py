import random
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chplx_lite.runtime import (Array, Atomic, Domain, Locales, Range, Single, SingleWriteError,
                                Sync, begin, cobegin, coforall, forall, here, make_array,
                                make_iter, parallel_quicksort, pool_session, wait_outstanding,
                                zip)


@pytest.fixture(params=[1, 4], ids=["w1", "w4"])
def workers(request):
    with pool_session(request.param) as pool:
        yield pool


# -- ranges ----------------------------------------------------------------

def test_range_examples():
    assert list(Range(1, 10).count(3)) == [1, 2, 3]
    assert list(Range(0, 9).by(2).count(2)) == [0, 2]
    assert list(Range(1, 10).count(0)) == []
    r = Range(0, 9).by(2)
    assert list(r) == [0, 2, 4, 6, 8] and r.size == 5
    assert list(Range(0, 9).by(-1)) == list(range(9, -1, -1))
    assert Range(3, 7).by(1) == Range(3, 7)
    assert list(Range(0, 9).by(2).align(1)) == [1, 3, 5, 7, 9]
    assert list(Range(0, 9).by(3).align(6)) == list(Range(0, 9).by(3))
    assert list(Range(5, 4).by(2).align(1)) == []


def test_range_errors():
    with pytest.raises(ValueError):
        Range(0, 9).by(0)
    with pytest.raises(ValueError):
        Range(1, 3).count(4)
    with pytest.raises(ValueError):
        Range(1, 3, 0)
    with pytest.raises(ValueError):
        iter(Range(1, None))
    assert list(Range(1, None).count(3)) == [1, 2, 3]


def test_range_size_formula():
    for low in range(-5, 6):
        for high in range(-5, 6):
            for s in range(1, 5):
                r = Range(low, high, s)
                assert r.size == max(0, (high - low) // s + 1)


def _oracle_seq(lo, hi, stride, anchor):
    seq = [i for i in range(lo, hi + 1) if (i - anchor) % abs(stride) == 0]
    return seq if stride > 0 else seq[::-1]


@st.composite
def range_programs(draw):
    lo = draw(st.integers(-500, 500))
    hi = lo + draw(st.integers(-3, 1000))
    s = draw(st.sampled_from([i for i in range(-8, 9) if i]))
    ops = draw(st.lists(st.one_of(
        st.tuples(st.just("by"), st.sampled_from([-4, -2, -1, 1, 2, 3])),
        st.tuples(st.just("count"), st.integers(0, 300)),
        st.tuples(st.just("align"), st.integers(-20, 20))), max_size=3))
    return lo, hi, s, ops


@settings(max_examples=10_000, deadline=None)
@given(range_programs())
def test_range_algebra_matches_enumeration(prog):
    lo, hi, s, ops = prog
    r = Range(lo, hi).by(s)
    seq = _oracle_seq(lo, hi, s, lo if s > 0 else hi)
    stride = s
    for op, v in ops:
        if op == "by":
            if abs(stride * v) > 8:
                continue
            r = r.by(v)
            seq = seq[::v] if v > 0 else seq[::-1][::-v]
            stride *= v
        elif op == "count":
            if v > len(seq):
                with pytest.raises(ValueError):
                    r.count(v)
                continue
            r = r.count(v)
            seq = seq[:v]
            lo, hi = (min(seq), max(seq)) if seq else (1, 0)
        else:
            r = r.align(v)
            seq = _oracle_seq(lo, hi, stride, v)
        assert list(r) == seq
        assert r.size == len(seq)
        assert all(i in r for i in seq)


def test_domain_row_major():
    d = Domain(Range(1, 2), Range(1, 3))
    assert d.size == 6 and d.shape == (2, 3)
    assert list(d) == [(i, j) for i in (1, 2) for j in (1, 2, 3)]
    assert [d.offset(ix) for ix in d] == list(range(6))


def test_array_indexing():
    a = make_array(Domain(Range(0, 1), Range(5, 7)), int)
    a[1, 6] = 9
    assert a.data[4] == 9 and a[1, 6] == 9
    with pytest.raises(IndexError):
        a[2, 5]
    with pytest.raises(IndexError):
        a[0, 4]
    b = Array(Range(1, 3), float)
    c = Array(Range(1, 3), float, init=2.0)
    b.swap(c)
    assert list(b) == [2.0] * 3 and list(c) == [0.0] * 3


def test_locale():
    assert len(Locales) == 1 and here.id == 0 and here.max_task_par >= 1


# -- parallel loops ----------------------------------------------------------

def test_forall_examples(workers):
    total = Atomic(0)
    forall(Range(1, 100), lambda i: total.add(i))
    assert total.read() == 5050
    calls = []
    forall(Range(1, 0), calls.append)
    assert calls == []
    seen = []
    lock = threading.Lock()

    def body(ix):
        with lock:
            seen.append(ix)
    forall(Domain(Range(1, 2), Range(1, 3)), body)
    assert sorted(seen) == [(i, j) for i in (1, 2) for j in (1, 2, 3)]


def test_forall_propagates_errors(workers):
    def body(i):
        if i == 7:
            raise KeyError(i)
    with pytest.raises(KeyError):
        forall(Range(1, 20), body)


@settings(max_examples=50, deadline=None)
@given(st.integers(-50, 50), st.integers(0, 300), st.sampled_from([1, 2, 3, -1, -5]))
def test_forall_equals_for(lo, n, s):
    r = Range(lo, lo + n - 1).by(s)
    idx = list(r)
    with pool_session(3):
        out = np.zeros(len(idx))
        forall(r, lambda i: out.__setitem__(r.index_of(i), i * i + 1.5))
    seq = np.zeros(len(idx))
    for i in idx:
        seq[r.index_of(i)] = i * i + 1.5
    assert np.array_equal(out, seq)


@pytest.mark.parametrize("n", [1, 4, 64])
def test_coforall_task_count(workers, n):
    entries = Atomic(0)
    ids = []
    lock = threading.Lock()

    def body(i):
        tid = entries.fetch_add(1)
        with lock:
            ids.append(tid)
    coforall(Range(1, n), body)
    assert entries.read() == n and len(set(ids)) == n


def test_coforall_rejects_unbounded():
    with pytest.raises(ValueError):
        coforall(Range(1, None), lambda i: None)


def test_begin_cobegin(workers):
    s = Sync()
    out = []
    cobegin(lambda: s.write_ef(1), lambda: out.append(s.read_fe()))
    assert out == [1]
    h = begin(lambda: None)
    h.join()
    assert h.done
    items, lock = [], threading.Lock()

    def add(k):
        def f():
            with lock:
                items.append(k)
        return f
    cobegin(add(1), add(2), add(3))
    assert sorted(items) == [1, 2, 3]
    begin(lambda: items.append(4))
    wait_outstanding()
    assert 4 in items


def test_nested_parallelism(workers):
    total = Atomic(0)
    forall(Range(1, 8), lambda i: coforall(Range(1, 4), lambda j: total.add(i * j)))
    assert total.read() == 36 * 10


def test_zip():
    assert list(zip(Range(1, 3), Range(4, 6))) == [(1, 4), (2, 5), (3, 6)]
    assert list(zip(Range(1, 3))) == [(1,), (2,), (3,)]
    with pytest.raises(ValueError):
        zip(Range(1, 3), Range(1, 4))
    assert list(zip([10, 20], Range(0, None))) == [(10, 0), (20, 1)]


def test_forall_over_zip(workers):
    a = Array(Range(1, 50), int)
    forall(zip(Range(1, 50), Range(101, 150)), lambda i, v: a.__setitem__(i, v), star=True)
    assert list(a) == list(range(101, 151))


# -- sync, single, atomic ----------------------------------------------------

def test_sync_basic():
    s = Sync()
    s.write_ef(5)
    assert s.is_full
    assert s.read_fe() == 5 and not s.is_full


def test_sync_producers_consumers(workers):
    n, k = 1000, 4
    s = Sync()
    got, lock = [], threading.Lock()

    def role(t):
        if t < k:
            for v in range(t, n, k):
                s.write_ef(v)
        else:
            mine = [s.read_fe() for _ in range(n // k)]
            with lock:
                got.extend(mine)
    coforall(Range(0, 2 * k - 1), role)
    assert sorted(got) == list(range(n))
    assert s.transitions == 2 * n and not s.is_full


def test_single():
    s = Single()
    out = []
    t = threading.Thread(target=lambda: out.append(s.read_ff()))
    t.start()
    s.write_ef(7)
    t.join(5)
    assert out == [7] and s.read_ff() == 7
    with pytest.raises(SingleWriteError):
        s.write_ef(8)


def test_atomic_ops():
    a = Atomic(0)
    assert a.fetch_add(3) == 0 and a.read() == 3
    assert not a.compare_exchange(4, 9) and a.compare_exchange(3, 9) and a.read() == 9
    a.write((1 << 63) - 1)
    a.add(1)
    assert a.read() == -(1 << 63)
    b = Atomic(False, bool)
    assert not b.test_and_set() and b.read()
    with pytest.raises(TypeError):
        b.add(1)


@given(st.integers(-(1 << 63), (1 << 63) - 1), st.integers(-(1 << 63), (1 << 63) - 1))
def test_atomic_xor_involution(init, mask):
    a = Atomic(init)
    a.fetch_xor(mask)
    a.fetch_xor(mask)
    assert a.read() == init


def test_atomic_contention(workers):
    a = Atomic(0)
    coforall(Range(1, 16), lambda i: [a.fetch_add(1) for _ in range(500)])
    assert a.read() == 8000


# -- iterators and quicksort -------------------------------------------------

def test_pull_iterator():
    it = make_iter(lambda: iter([1, 2, 3]))
    assert [it.next() for _ in range(4)] == [1, 2, 3, None]
    assert make_iter(iter([])).next() is None

    def fib():
        a, b = 1, 1
        while True:
            yield a
            a, b = b, a + b
    it = make_iter(fib)
    assert [it.next() for _ in range(5)] == [1, 1, 2, 3, 5]


def test_iterator_error_surfaces_at_next():
    def bad():
        yield 1
        raise RuntimeError("producer failed")
    it = make_iter(bad)
    assert it.next() == 1
    with pytest.raises(RuntimeError):
        it.next()


def test_quicksort_examples(workers):
    assert list(parallel_quicksort([3, 1, 2])) == [1, 2, 3]
    assert list(parallel_quicksort(range(1, 1001))) == list(range(1, 1001))
    assert list(parallel_quicksort([])) == []


def test_quicksort_random_large(workers):
    rng = random.Random(12345)
    values = [rng.randrange(-(1 << 63), 1 << 63) for _ in range(100_000)]
    out = parallel_quicksort(values, cutoff=1 << 12)
    assert list(out) == sorted(values)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-1000, 1000), max_size=300), st.integers(1, 16))
def test_quicksort_permutation(values, cutoff):
    out = list(parallel_quicksort(values, cutoff=cutoff))
    assert out == sorted(values)
