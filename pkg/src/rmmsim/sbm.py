"""Stochastic block model G_m(n, p, q) and its near-critical rescaling.

Vertices are numbered in the round-robin class layout: class ``l`` (1-based)
is ``B_l = {l, m+l, 2m+l, ..., (n-1)m+l}``.  Intra-class pairs are open with
probability ``p`` and inter-class pairs with probability ``q``.

Two samplers are provided.  The coupled one builds the rescaled component
vector from shared exponential thresholds (two rounds of restricted merging),
so it supports per-seed comparisons; the fast one draws open edges directly
by geometric skipping and only matches in distribution.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .engine import ComponentVector, rmm_many
from .errors import DomainError
from .field import COPY_A, COPY_A_PRIME, COPY_FAST, trial_stream, trial_streams
from .parallel import run_trials
from .relations import InterClass, IntraClass


def critical_times(n, t, u):
    """(t_n, u_n) with 1 - exp(-t_n n^{-4/3}) = 1/n + t n^{-4/3} and likewise u_n."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be a positive integer")
    scale = n ** (4.0 / 3.0)
    p = 1.0 / n + t / scale
    q = u / scale
    if not 0 <= p < 1:
        raise DomainError(f"1/n + t n^(-4/3) = {p} is not in [0, 1)")
    if not 0 <= q < 1:
        raise DomainError(f"u n^(-4/3) = {q} is not in [0, 1)")
    return -scale * math.log1p(-p), -scale * math.log1p(-q)


@dataclass(frozen=True)
class SbmParams:
    """``n`` vertices per class, ``m`` classes, edge probabilities ``p`` and ``q``.

    Build with :meth:`raw` or :meth:`critical`; ``t`` and ``u`` are kept for
    the record in critical mode.
    """

    n: int
    m: int
    p: float
    q: float
    t: float = None
    u: float = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise DomainError("n and m must be positive integers")
        if not (0 <= self.p <= 1 and 0 <= self.q <= 1):
            raise DomainError(f"edge probabilities must lie in [0, 1], got p={self.p}, q={self.q}")

    @classmethod
    def raw(cls, n, m, p, q):
        return cls(int(n), int(m), float(p), float(q))

    @classmethod
    def critical(cls, n, m, t, u):
        critical_times(n, t, u)
        scale = n ** (-4.0 / 3.0)
        return cls(int(n), int(m), 1.0 / n + t * scale, u * scale, float(t), float(u))

    @property
    def mode(self):
        return "raw" if self.t is None else "critical"

    @property
    def vertices(self):
        return self.n * self.m


def _class_pairs(n, m):
    pairs = [IntraClass(m, l).pairs(n * m) for l in range(1, m + 1)]
    return pairs, InterClass(m).pairs(n * m)


def zeta_many(n, m, t, u, seed, base_stream=0, trials=1, start=0, threads=None):
    """(trials, n*m) array of rescaled component vectors from the coupled construction.

    Per class ``l`` the masses ``n^{-2/3}`` on ``B_l`` (zero elsewhere) are
    merged along intra-class pairs with thresholds ``A`` at time ``t_n``; the
    first ``n`` entries of each result are interleaved by the round-robin
    join and merged along inter-class pairs with the independent copy ``A'``
    at time ``u_n``.
    """
    t_n, u_n = critical_times(n, t, u)
    width = n * m
    intra, inter = _class_pairs(n, m)
    mass = n ** (-2.0 / 3.0)

    def chunk(s, c):
        streams = trial_streams(base_stream, c, COPY_A, start + s)
        parts = np.empty((c, n, m))
        for l in range(m):
            x = np.zeros(width)
            x[l::m] = mass
            parts[:, :, l] = rmm_many(x, None, t_n, seed, streams, pairs=intra[l])[:, :n]
        joined = parts.reshape(c, width)
        if u_n == 0:
            return -np.sort(-joined, axis=1)
        streams = trial_streams(base_stream, c, COPY_A_PRIME, start + s)
        return rmm_many(joined, None, u_n, seed, streams, pairs=inter)

    return run_trials(chunk, trials, threads)


def zeta_n(n, m, t, u, seed, stream=0):
    """One coupled sample of the rescaled component vector zeta^(n)(t, u)."""
    return ComponentVector(zeta_many(n, m, t, u, seed, stream, 1)[0])


def _skip_indices(total, p, rng):
    """Sorted indices in [0, total) each kept independently with probability p."""
    if p <= 0 or total <= 0:
        return np.empty(0, np.int64)
    if p >= 1:
        return np.arange(total, dtype=np.int64)
    out = []
    pos = -1
    mean = total * p
    batch = int(mean + 6 * math.sqrt(mean) + 16)
    while True:
        gaps = rng.geometric(p, batch)
        idx = pos + np.cumsum(gaps)
        inside = idx[idx < total]
        out.append(inside)
        if inside.size < idx.size:
            break
        pos = int(idx[-1])
    return np.concatenate(out).astype(np.int64)


def _triangle_decode(k):
    """Index k of the pair (a, b), a < b, in the order (0,1), (0,2), (1,2), (0,3), ..."""
    b = np.floor((1 + np.sqrt(1 + 8 * k.astype(np.float64))) / 2).astype(np.int64)
    b = np.where(b * (b - 1) // 2 > k, b - 1, b)
    b = np.where((b + 1) * b // 2 <= k, b + 1, b)
    return k - b * (b - 1) // 2, b


def fast_edges(params: SbmParams, rng):
    """Open edges (0-based endpoints) of one G_m(n, p, q) sample."""
    n, m = params.n, params.m
    src = []
    dst = []
    for l in range(m):
        a, b = _triangle_decode(_skip_indices(n * (n - 1) // 2, params.p, rng))
        src.append(a * m + l)
        dst.append(b * m + l)
    if m > 1:
        cls_a, cls_b = np.triu_indices(m, 1)
        k = _skip_indices(cls_a.size * n * n, params.q, rng)
        cp, r = np.divmod(k, n * n)
        a, b = np.divmod(r, n)
        src.append(a * m + cls_a[cp])
        dst.append(b * m + cls_b[cp])
    return np.concatenate(src), np.concatenate(dst)


def sbm_fast_sample(params: SbmParams, rng):
    """Component sizes of one G_m(n, p, q) sample, sorted, padded to n*m."""
    src, dst = fast_edges(params, rng)
    labels = kernels.component_labels(params.vertices, src, dst)
    sizes = np.bincount(labels, minlength=params.vertices).astype(np.float64)
    return ComponentVector(-np.sort(-sizes))


def fast_rng(seed, base_stream, trial):
    return np.random.default_rng([int(seed), trial_stream(base_stream, trial, COPY_FAST)])


def fast_many(params: SbmParams, seed, base_stream=0, trials=1, start=0, threads=None):
    """(trials, n*m) array of component sizes from independent fast samples."""

    def chunk(s, c):
        out = np.empty((c, params.vertices))
        for k in range(c):
            out[k] = sbm_fast_sample(params, fast_rng(seed, base_stream, start + s + k)).masses
        return out

    return run_trials(chunk, trials, threads)


@dataclass
class LargestComponent:
    """Monte Carlo law of n^{-2/3} C(n, p, q)."""

    samples: np.ndarray  # rescaled largest sizes in trial order

    @property
    def mean(self):
        return float(np.mean(self.samples))

    def cdf(self, y):
        s = np.sort(self.samples)
        return np.searchsorted(s, y, side="right") / s.size

    def exceeds(self, level):
        """Fraction of trials with n^{-2/3} C > level."""
        return float(np.mean(self.samples > level))


def largest_component(params: SbmParams, trials, seed, base_stream=0, threads=None):
    """Rescaled largest component over ``trials`` fast samples."""

    def chunk(s, c):
        out = np.empty(c)
        for k in range(c):
            out[k] = sbm_fast_sample(params, fast_rng(seed, base_stream, s + k)).largest
        return out

    samples = run_trials(chunk, trials, threads) * params.n ** (-2.0 / 3.0)
    return LargestComponent(samples)
