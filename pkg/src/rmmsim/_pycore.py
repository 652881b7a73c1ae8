"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_ccore`` extension is unavailable, or when
``RMMSIM_PURE=1`` is set.  Every function here has a twin in ``_ccore.pyx``
with the same signature; results agree bit-for-bit on the random words and to
rounding on floating-point sums.
"""

import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_MASK32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S11 = np.uint64(11)
_TWO_M53 = 2.0**-53
_TWO53 = np.uint64(1 << 53)
_HALF53 = np.uint64(1 << 52)

MAX_INDEX = 0xFFFFFFFF


def philox4x32(c0, c1, c2, c3, k0, k1):
    """Philox-4x32-10 block function on uint64 arrays holding 32-bit words.

    Returns the four output words.  ``k0`` and ``k1`` are Python ints.
    """
    c0 = np.asarray(c0, dtype=np.uint64)
    c1 = np.asarray(c1, dtype=np.uint64)
    c2 = np.asarray(c2, dtype=np.uint64)
    c3 = np.asarray(c3, dtype=np.uint64)
    k0 = int(k0) & 0xFFFFFFFF
    k1 = int(k1) & 0xFFFFFFFF
    for r in range(10):
        if r:
            k0 = (k0 + _W0) & 0xFFFFFFFF
            k1 = (k1 + _W1) & 0xFFFFFFFF
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> _S32) ^ c1 ^ np.uint64(k0),
            p1 & _MASK32,
            (p0 >> _S32) ^ c3 ^ np.uint64(k1),
            p0 & _MASK32,
        )
    return c0, c1, c2, c3


def edge_words(seed, streams, i, j):
    """64-bit random word for each (stream, min(i,j), max(i,j)) under ``seed``."""
    streams = np.asarray(streams, dtype=np.uint64)
    i = np.asarray(i, dtype=np.uint64)
    j = np.asarray(j, dtype=np.uint64)
    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    seed = int(seed)
    o0, o1, _, _ = philox4x32(
        lo, hi, streams & _MASK32, streams >> _S32, seed & 0xFFFFFFFF, seed >> 32
    )
    return o0 | (o1 << _S32)


def words_to_exp(words):
    # u = (h + 1/2) 2^-53; the upper half goes through 1 - u so that both
    # branches are exact and u never rounds to 1
    h = np.asarray(words, dtype=np.uint64) >> _S11
    low = h < _HALF53
    out = np.empty(h.shape)
    out[low] = -np.log((h[low].astype(np.float64) + 0.5) * _TWO_M53)
    out[~low] = -np.log1p(-((_TWO53 - h[~low]).astype(np.float64) - 0.5) * _TWO_M53)
    return out


def exp_thresholds(seed, streams, i, j):
    """Exponential(1) thresholds, broadcasting ``streams``, ``i`` and ``j``."""
    streams, i, j = np.broadcast_arrays(
        np.asarray(streams, dtype=np.uint64),
        np.asarray(i, dtype=np.int64),
        np.asarray(j, dtype=np.int64),
    )
    return words_to_exp(edge_words(seed, streams, i, j))


def component_labels(n_vertices, src, dst):
    """Canonical component label (smallest member) of each vertex.

    Hooking plus pointer jumping; ``src``/``dst`` are 0-based edge endpoints.
    """
    lab = np.arange(n_vertices, dtype=np.int64)
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.size == 0:
        return lab
    while True:
        a = lab[src]
        b = lab[dst]
        if np.array_equal(a, b):
            return lab
        lo = np.minimum(a, b)
        np.minimum.at(lab, a, lo)
        np.minimum.at(lab, b, lo)
        while True:
            nxt = lab[lab]
            if np.array_equal(nxt, lab):
                break
            lab = nxt


def _sorted_rows(labels, masses, n_rows, width):
    """Sum ``masses`` per label and lay them out as descending rows."""
    sums = np.bincount(labels, weights=masses, minlength=n_rows * width)
    out = -np.sort(-sums.reshape(n_rows, width), axis=1)
    return out


def rmm_batch(x, i, j, t, seed, streams, offset):
    """Sorted component masses for many independent threshold tables.

    ``x`` has shape (S, n); ``i``, ``j`` are 1-based admissible pairs;
    trial ``s`` reads thresholds from ``streams[s]`` with indices shifted by
    ``offset``.  Returns an (S, n) array, each row nonincreasing.
    """
    x = np.asarray(x, dtype=np.float64)
    n_rows, n = x.shape
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    streams = np.asarray(streams, dtype=np.uint64)
    out = np.empty((n_rows, n), dtype=np.float64)
    if n_rows == 0:
        return out
    chunk = max(1, 4_000_000 // max(1, i.size))
    for start in range(0, n_rows, chunk):
        stop = min(n_rows, start + chunk)
        xs = x[start:stop]
        w = xs[:, i - 1] * xs[:, j - 1] * t
        rows, cols = np.nonzero(w > 0)
        thr = exp_thresholds(seed, streams[start:stop][rows], i[cols] + offset, j[cols] + offset)
        keep = thr <= w[rows, cols]
        rows = rows[keep]
        cols = cols[keep]
        m = stop - start
        src = rows * n + (i[cols] - 1)
        dst = rows * n + (j[cols] - 1)
        lab = component_labels(m * n, src, dst)
        out[start:stop] = _sorted_rows(lab, xs.ravel(), m, n)
    return out
