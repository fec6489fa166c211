# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.  Each function works on a half-open block
[lo, hi) of a numpy buffer and releases the GIL while it runs."""

from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    """
    static inline void chplx_atomic_xor(int64_t *p, int64_t v) {
        __atomic_fetch_xor(p, v, __ATOMIC_RELAXED);
    }
    """
    void chplx_atomic_xor(int64_t *p, int64_t v) nogil

NAME = "compiled"


def heat_block(const double[::1] u, double[::1] unew, Py_ssize_t lo, Py_ssize_t hi,
               double dt, double alpha, double denom):
    cdef Py_ssize_t i
    with nogil:
        for i in range(lo, hi):
            unew[i] = u[i] + dt * alpha * (u[i - 1] - 2.0 * u[i] + u[i + 1]) / denom


def stream_copy(double[::1] c, const double[::1] a, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t i
    with nogil:
        for i in range(lo, hi):
            c[i] = a[i]


def stream_scale(double[::1] b, const double[::1] c, double q, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t i
    with nogil:
        for i in range(lo, hi):
            b[i] = q * c[i]


def stream_add(double[::1] c, const double[::1] a, const double[::1] b,
               Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t i
    with nogil:
        for i in range(lo, hi):
            c[i] = a[i] + b[i]


def stream_triad(double[::1] a, const double[::1] b, const double[::1] c, double q,
                 Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t i
    with nogil:
        for i in range(lo, hi):
            a[i] = b[i] + q * c[i]


def gups_block(int64_t[::1] table, uint64_t state, Py_ssize_t count, int64_t literal):
    """Advance the xorshift64 stream *count* times from *state*, xor-ing
    *literal* into the table slot picked by each value.  Returns the final state."""
    cdef Py_ssize_t k
    cdef uint64_t x = state
    cdef uint64_t mask = <uint64_t>(table.shape[0] - 1)
    cdef int64_t *base = &table[0]
    with nogil:
        for k in range(count):
            x ^= x << 13
            x ^= x >> 7
            x ^= x << 17
            chplx_atomic_xor(base + <Py_ssize_t>(x & mask), literal)
    return x


def fma_sweep(double[::1] x, Py_ssize_t lo, Py_ssize_t hi, double a, double b, int reps):
    cdef Py_ssize_t i
    cdef int r
    with nogil:
        for r in range(reps):
            for i in range(lo, hi):
                x[i] = x[i] * a + b


cdef inline void _swap(int64_t *v, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef int64_t t = v[i]
    v[i] = v[j]
    v[j] = t


cdef int64_t _median3(int64_t a, int64_t b, int64_t c) noexcept nogil:
    if a < b:
        if b < c:
            return b
        return c if a < c else a
    if a < c:
        return a
    return c if b < c else b


cdef void _partition3(int64_t *v, Py_ssize_t lo, Py_ssize_t hi,
                      Py_ssize_t *lt_out, Py_ssize_t *gt_out) noexcept nogil:
    # three-way partition of v[lo:hi] around a median-of-three pivot
    cdef int64_t p = _median3(v[lo], v[lo + (hi - lo) // 2], v[hi - 1])
    cdef Py_ssize_t lt = lo, i = lo, gt = hi
    while i < gt:
        if v[i] < p:
            _swap(v, lt, i)
            lt += 1
            i += 1
        elif v[i] > p:
            gt -= 1
            _swap(v, i, gt)
        else:
            i += 1
    lt_out[0] = lt
    gt_out[0] = gt


cdef void _insertion(int64_t *v, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef int64_t t
    for i in range(lo + 1, hi):
        t = v[i]
        j = i - 1
        while j >= lo and v[j] > t:
            v[j + 1] = v[j]
            j -= 1
        v[j + 1] = t


cdef void _quicksort(int64_t *v, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t lt, gt
    while hi - lo > 16:
        _partition3(v, lo, hi, &lt, &gt)
        # recurse into the smaller side to bound stack depth
        if lt - lo < hi - gt:
            _quicksort(v, lo, lt)
            lo = gt
        else:
            _quicksort(v, gt, hi)
            hi = lt
    _insertion(v, lo, hi)


def partition(int64_t[::1] buf, Py_ssize_t lo, Py_ssize_t hi):
    """Three-way partition of buf[lo:hi]; returns (lt, gt) so that
    buf[lo:lt] < pivot == buf[lt:gt] < buf[gt:hi]."""
    cdef Py_ssize_t lt = lo, gt = hi
    if hi - lo > 0:
        with nogil:
            _partition3(&buf[0], lo, hi, &lt, &gt)
    return lt, gt


def sort_block(int64_t[::1] buf, Py_ssize_t lo, Py_ssize_t hi):
    if hi - lo > 1:
        with nogil:
            _quicksort(&buf[0], lo, hi)
