"""Restricted multiplicative merging on finite-support mass vectors.

Mass vectors are plain 1-D float arrays (index ``k`` holds the mass of vertex
``k+1``; zero masses are kept because positions matter).  The output of
:func:`rmm` is a :class:`ComponentVector`.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .field import ThresholdField
from .relations import Relation


def as_mass_vector(x):
    x = np.array(x, dtype=np.float64, ndmin=1)
    if x.ndim != 1:
        raise ValueError("a mass vector is one-dimensional")
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise ValueError("masses must be finite and nonnegative")
    return x


@dataclass(frozen=True, eq=False)
class ComponentVector:
    """Nonincreasing nonnegative masses, e.g. ordered component masses."""

    masses: np.ndarray

    def __post_init__(self):
        m = np.array(self.masses, dtype=np.float64, ndmin=1)
        if m.size > 1 and np.any(np.diff(m) > 0):
            raise ValueError("component masses must be nonincreasing")
        if m.size and m[-1] < 0:
            raise ValueError("component masses must be nonnegative")
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @property
    def norm_sq(self):
        return float(np.dot(self.masses, self.masses))

    @property
    def norm(self):
        return float(np.sqrt(self.norm_sq))

    @property
    def total(self):
        return float(self.masses.sum())

    @property
    def largest(self):
        return float(self.masses[0]) if self.masses.size else 0.0

    @property
    def length(self):
        """Index of the last nonzero coordinate (0 for the zero vector)."""
        return int(np.count_nonzero(self.masses))

    def nonzero(self):
        return self.masses[: self.length]

    def __len__(self):
        return self.masses.size

    def __iter__(self):
        return iter(self.masses.tolist())

    def __getitem__(self, k):
        return self.masses[k]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.masses, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, ComponentVector):
            return NotImplemented
        a, b = self.nonzero(), other.nonzero()
        return a.shape == b.shape and bool(np.all(a == b))

    def __repr__(self):
        return f"ComponentVector({self.masses.tolist()})"


def ordered(x):
    """Nonincreasing rearrangement; ties keep their original order."""
    x = np.asarray(x, dtype=np.float64)
    return ComponentVector(x[np.argsort(-x, kind="stable")])


def _check_t(t):
    t = float(t)
    if not t >= 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    return t


def open_edges(x, field: ThresholdField, relation: Relation, t):
    """Edges ``{i, j}`` of the graph G_t(x; A, R) as 1-based arrays."""
    x = as_mass_vector(x)
    t = _check_t(t)
    i, j = relation.pairs(x.size)
    w = x[i - 1] * x[j - 1] * t
    pos = w > 0
    i, j, w = i[pos], j[pos], w[pos]
    is_open = field.evaluate_many(i, j) <= w
    return i[is_open], j[is_open]


def build_components(x, field: ThresholdField, relation: Relation, t):
    """Partition of ``[len(x)]`` into the connected components of G_t(x; A, R).

    Returns a list of sorted lists of 1-based vertices, ordered by smallest
    member.
    """
    x = as_mass_vector(x)
    i, j = open_edges(x, field, relation, t)
    labels = kernels.component_labels(x.size, i - 1, j - 1)
    classes = {}
    for v, lab in enumerate(labels.tolist(), start=1):
        classes.setdefault(lab, []).append(v)
    return [classes[k] for k in sorted(classes)]


def rmm(x, field: ThresholdField, relation: Relation, t):
    """RMM_t(x; A, R): ordered component masses of G_t(x; A, R)."""
    x = as_mass_vector(x)
    t = _check_t(t)
    row = rmm_many(x, relation, t, field.seed, [field.stream_id], offset=field.offset)[0]
    return ComponentVector(row)


def rmm_many(x, relation: Relation, t, seed, streams, offset=0, pairs=None):
    """RMM for one threshold table per stream id, as an (S, n) array.

    ``x`` is either one mass vector shared by all trials or an (S, n) array
    of per-trial masses.  Each row of the result is nonincreasing and padded
    with zeros.
    """
    t = _check_t(t)
    streams = np.asarray(streams, dtype=np.uint64).ravel()
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = np.broadcast_to(x, (streams.size, x.size))
    if x.shape[0] != streams.size:
        raise ValueError("need one stream id per row of x")
    i, j = relation.pairs(x.shape[1]) if pairs is None else pairs
    if i.size and int(j.max()) + offset > kernels.MAX_INDEX:
        raise ValueError("vertex index exceeds the threshold field's range")
    return kernels.rmm_batch(x, i, j, t, seed, streams, int(offset))


def uplus(x, y):
    """Concatenate the nonzero prefix of ``x`` with ``y`` (noncommutative)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    nz = np.flatnonzero(x)
    m = int(nz[-1]) + 1 if nz.size else 0
    return np.concatenate([x[:m], y])


def round_robin_join(xs):
    """Interleave m vectors: output[(k-1)m + l] = xs[l][k], zero padded."""
    xs = [np.asarray(v, dtype=np.float64) for v in xs]
    if not xs:
        raise ValueError("need at least one vector")
    m = len(xs)
    width = max(v.size for v in xs)
    out = np.zeros((width, m))
    for l, v in enumerate(xs):
        out[: v.size, l] = v
    return out.ravel()


def tail_shift(x, m):
    """Drop the first ``m`` coordinates."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return np.array(np.asarray(x, dtype=np.float64)[m:])


def head_truncate(x, m):
    """Zero every coordinate past ``m``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = np.array(x, dtype=np.float64)
    out[m:] = 0.0
    return out


def grind(x, m, M):
    """Split each of the first ``m`` masses into ``M`` equal pieces."""
    x = as_mass_vector(x)
    if not 1 <= m <= x.size:
        raise ValueError(f"need 1 <= m <= {x.size}")
    if M < 1:
        raise ValueError("M must be a positive integer")
    return np.concatenate([np.repeat(x[:m] / M, M), x[m:]])


def norm_sq(v):
    v = np.asarray(v, dtype=np.float64)
    return float(np.dot(v, v))


def component_rows(x, rows, a, b):
    """Sorted component masses of S graphs given their edges.

    ``x`` is (S, n); edge ``k`` joins 0-based vertices ``a[k]`` and ``b[k]``
    in graph ``rows[k]``.
    """
    x = np.asarray(x, dtype=np.float64)
    s, n = x.shape
    rows = np.asarray(rows, dtype=np.int64)
    labels = kernels.component_labels(s * n, rows * n + a, rows * n + b)
    sums = np.bincount(labels, weights=x.ravel(), minlength=s * n)
    return -np.sort(-sums.reshape(s, n), axis=1)
