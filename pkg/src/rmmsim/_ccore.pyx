# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Philox threshold words, union-find, batched RMM.

Mirrors ``_pycore`` function for function.
"""

import numpy as np

from libc.math cimport log, log1p
from libc.stdint cimport int64_t, uint32_t, uint64_t
from libc.stdlib cimport free, malloc, qsort

MAX_INDEX = 0xFFFFFFFF

cdef uint64_t M0 = 0xD2511F53
cdef uint64_t M1 = 0xCD9E8D57
cdef uint32_t W0 = 0x9E3779B9
cdef uint32_t W1 = 0xBB67AE85
cdef double TWO_M53 = 1.1102230246251565e-16
cdef uint64_t TWO53 = 1 << 53
cdef uint64_t HALF53 = 1 << 52


cdef inline void _philox(uint32_t* c, uint32_t k0, uint32_t k1) noexcept nogil:
    cdef uint64_t p0, p1
    cdef uint32_t c1, c3
    cdef int r
    for r in range(10):
        if r:
            k0 = k0 + W0
            k1 = k1 + W1
        p0 = M0 * <uint64_t>c[0]
        p1 = M1 * <uint64_t>c[2]
        c1 = c[1]
        c3 = c[3]
        c[0] = <uint32_t>(p1 >> 32) ^ c1 ^ k0
        c[1] = <uint32_t>p1
        c[2] = <uint32_t>(p0 >> 32) ^ c3 ^ k1
        c[3] = <uint32_t>p0


cdef inline uint64_t _edge_word(uint64_t seed, uint64_t stream, int64_t i, int64_t j) noexcept nogil:
    cdef uint32_t c[4]
    if i > j:
        i, j = j, i
    c[0] = <uint32_t>i
    c[1] = <uint32_t>j
    c[2] = <uint32_t>stream
    c[3] = <uint32_t>(stream >> 32)
    _philox(c, <uint32_t>seed, <uint32_t>(seed >> 32))
    return <uint64_t>c[0] | (<uint64_t>c[1] << 32)


cdef inline double _word_exp(uint64_t w) noexcept nogil:
    # u = (h + 1/2) 2^-53; the upper half goes through 1 - u so that both
    # branches are exact and u never rounds to 1
    cdef uint64_t h = w >> 11
    if h < HALF53:
        return -log((<double>h + 0.5) * TWO_M53)
    return -log1p(-(<double>(TWO53 - h) - 0.5) * TWO_M53)


cdef inline double _edge_exp(uint64_t seed, uint64_t stream, int64_t i, int64_t j) noexcept nogil:
    return _word_exp(_edge_word(seed, stream, i, j))


def philox4x32(c0, c1, c2, c3, k0, k1):
    """Philox-4x32-10 block function on a single counter (for testing)."""
    cdef uint32_t c[4]
    c[0] = <uint32_t>(int(c0) & 0xFFFFFFFF)
    c[1] = <uint32_t>(int(c1) & 0xFFFFFFFF)
    c[2] = <uint32_t>(int(c2) & 0xFFFFFFFF)
    c[3] = <uint32_t>(int(c3) & 0xFFFFFFFF)
    _philox(c, <uint32_t>(int(k0) & 0xFFFFFFFF), <uint32_t>(int(k1) & 0xFFFFFFFF))
    return c[0], c[1], c[2], c[3]


def edge_words(seed, streams, i, j):
    s, a, b = np.broadcast_arrays(
        np.asarray(streams, dtype=np.uint64),
        np.asarray(i, dtype=np.int64),
        np.asarray(j, dtype=np.int64),
    )
    shape = s.shape
    cdef const uint64_t[:] sv = np.ascontiguousarray(s).ravel()
    cdef const int64_t[:] av = np.ascontiguousarray(a).ravel()
    cdef const int64_t[:] bv = np.ascontiguousarray(b).ravel()
    out = np.empty(sv.shape[0], dtype=np.uint64)
    cdef uint64_t[:] ov = out
    cdef uint64_t sd = <uint64_t>int(seed)
    cdef Py_ssize_t k
    with nogil:
        for k in range(sv.shape[0]):
            ov[k] = _edge_word(sd, sv[k], av[k], bv[k])
    return out.reshape(shape)


def words_to_exp(words):
    shape = np.shape(words)
    w = np.ascontiguousarray(words, dtype=np.uint64)
    cdef const uint64_t[:] wv = w.ravel()
    out = np.empty(wv.shape[0], dtype=np.float64)
    cdef double[:] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(wv.shape[0]):
            ov[k] = _word_exp(wv[k])
    return out.reshape(shape)


def exp_thresholds(seed, streams, i, j):
    s, a, b = np.broadcast_arrays(
        np.asarray(streams, dtype=np.uint64),
        np.asarray(i, dtype=np.int64),
        np.asarray(j, dtype=np.int64),
    )
    shape = s.shape
    cdef const uint64_t[:] sv = np.ascontiguousarray(s).ravel()
    cdef const int64_t[:] av = np.ascontiguousarray(a).ravel()
    cdef const int64_t[:] bv = np.ascontiguousarray(b).ravel()
    out = np.empty(sv.shape[0], dtype=np.float64)
    cdef double[:] ov = out
    cdef uint64_t sd = <uint64_t>int(seed)
    cdef Py_ssize_t k
    with nogil:
        for k in range(sv.shape[0]):
            ov[k] = _edge_exp(sd, sv[k], av[k], bv[k])
    return out.reshape(shape)


cdef inline int64_t _find(int64_t* parent, int64_t v) noexcept nogil:
    cdef int64_t root = v, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        nxt = parent[v]
        parent[v] = root
        v = nxt
    return root


cdef inline void _union(int64_t* parent, int64_t* size, double* mass,
                        int64_t a, int64_t b) noexcept nogil:
    a = _find(parent, a)
    b = _find(parent, b)
    if a == b:
        return
    if size[a] < size[b]:
        a, b = b, a
    parent[b] = a
    size[a] += size[b]
    mass[a] += mass[b]


def component_labels(Py_ssize_t n_vertices, src, dst):
    """Canonical component label (smallest member) of each vertex."""
    cdef const int64_t[:] sv = np.ascontiguousarray(src, dtype=np.int64)
    cdef const int64_t[:] dv = np.ascontiguousarray(dst, dtype=np.int64)
    parent_arr = np.arange(n_vertices, dtype=np.int64)
    size_arr = np.ones(n_vertices, dtype=np.int64)
    mass_arr = np.zeros(n_vertices, dtype=np.float64)
    lab_arr = np.empty(n_vertices, dtype=np.int64)
    cdef int64_t[:] parent = parent_arr
    cdef int64_t[:] size = size_arr
    cdef double[:] mass = mass_arr
    cdef int64_t[:] lab = lab_arr
    cdef Py_ssize_t k
    cdef int64_t r
    with nogil:
        for k in range(sv.shape[0]):
            _union(&parent[0], &size[0], &mass[0], sv[k], dv[k])
        for k in range(n_vertices):
            lab[k] = -1
        # vertices are visited in increasing order, so the first one seen
        # for a root is the smallest member
        for k in range(n_vertices):
            r = _find(&parent[0], k)
            if lab[r] < 0:
                lab[r] = k
        for k in range(n_vertices):
            r = _find(&parent[0], k)
            if r != k:
                lab[k] = lab[r]
    return lab_arr


cdef int _cmp_desc(const void* a, const void* b) noexcept nogil:
    cdef double x = (<double*>a)[0]
    cdef double y = (<double*>b)[0]
    if x < y:
        return 1
    if x > y:
        return -1
    return 0


def rmm_batch(x, i, j, double t, seed, streams, int64_t offset):
    """Sorted component masses for many independent threshold tables."""
    cdef const double[:, :] xv = np.asarray(x, dtype=np.float64)
    cdef const int64_t[:] iv = np.ascontiguousarray(i, dtype=np.int64)
    cdef const int64_t[:] jv = np.ascontiguousarray(j, dtype=np.int64)
    cdef const uint64_t[:] stv = np.ascontiguousarray(streams, dtype=np.uint64)
    cdef Py_ssize_t n_rows = xv.shape[0], n = xv.shape[1], n_pairs = iv.shape[0]
    out_arr = np.zeros((n_rows, n), dtype=np.float64)
    cdef double[:, :] out = out_arr
    cdef uint64_t sd = <uint64_t>int(seed)
    cdef Py_ssize_t s, p, v, k
    cdef int64_t a, b
    cdef double w
    cdef int64_t* parent
    cdef int64_t* size
    cdef double* mass
    cdef double* buf
    if n_rows == 0 or n == 0:
        return out_arr
    parent = <int64_t*>malloc(n * sizeof(int64_t))
    size = <int64_t*>malloc(n * sizeof(int64_t))
    mass = <double*>malloc(n * sizeof(double))
    buf = <double*>malloc(n * sizeof(double))
    if not parent or not size or not mass or not buf:
        free(parent); free(size); free(mass); free(buf)
        raise MemoryError()
    try:
        with nogil:
            for s in range(n_rows):
                for v in range(n):
                    parent[v] = v
                    size[v] = 1
                    mass[v] = xv[s, v]
                for p in range(n_pairs):
                    a = iv[p] - 1
                    b = jv[p] - 1
                    w = xv[s, a] * xv[s, b] * t
                    if w > 0 and _edge_exp(sd, stv[s], iv[p] + offset, jv[p] + offset) <= w:
                        _union(parent, size, mass, a, b)
                k = 0
                for v in range(n):
                    if parent[v] == v:
                        buf[k] = mass[v]
                        k += 1
                qsort(buf, k, sizeof(double), _cmp_desc)
                for v in range(k):
                    out[s, v] = buf[v]
    finally:
        free(parent); free(size); free(mass); free(buf)
    return out_arr
