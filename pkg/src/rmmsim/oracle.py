"""Exact laws for small instances by enumerating every edge configuration.

For masses ``x``, relation ``R`` and time ``t`` each admissible pair
``{i, j}`` is open independently with probability ``1 - exp(-x_i x_j t)``.
With ``K`` admissible pairs the ``2**K`` configurations are enumerated in
chunks; each one's probability is the product of its edge factors and its
partition is found by label propagation.  Nothing here touches the
threshold field, so it is an independent check on the sampling code.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .engine import ComponentVector, as_mass_vector
from .errors import CapacityError, DomainError
from .relations import MAXIMAL, Relation

MAX_PAIRS = 24
_CHUNK_BITS = 16
_KEY_DECIMALS = 10


@dataclass
class ExactDistribution:
    outcomes: list  # [(ComponentVector, probability)], most likely first
    edge_probs: dict = field(default_factory=dict)  # {(i, j): p_ij}

    @property
    def total_probability(self):
        return math.fsum(p for _, p in self.outcomes)

    def probability(self, event):
        """P(event(component_vector))."""
        return math.fsum(p for v, p in self.outcomes if event(v))

    def expectation(self, fn):
        return math.fsum(p * fn(v) for v, p in self.outcomes)

    def as_dict(self):
        """{rounded nonzero masses tuple: probability}."""
        return {outcome_key(v.masses): p for v, p in self.outcomes}

    def to_json(self):
        outcomes = [[v.masses.tolist(), p] for v, p in self.outcomes]
        blob = json.dumps(outcomes, sort_keys=True, separators=(",", ":"))
        return {
            "outcomes": outcomes,
            "total_probability": self.total_probability,
            "checksum": hashlib.sha256(blob.encode()).hexdigest(),
        }


def outcome_key(masses):
    """Hashable key for a component vector: rounded nonzero masses."""
    m = np.round(np.asarray(masses, dtype=np.float64), _KEY_DECIMALS)
    m = -np.sort(-m)
    return tuple(float(v) for v in m[m > 0])


def _check_t(t):
    t = float(t)
    if not t >= 0:
        raise DomainError("time must be nonnegative")
    return t


def _admissible(x, relation, t):
    i, j = relation.pairs(x.size)
    w = x[i - 1] * x[j - 1] * t
    keep = w > 0
    i, j, w = i[keep], j[keep], w[keep]
    if i.size > MAX_PAIRS:
        raise CapacityError(f"{i.size} admissible pairs; enumeration is limited to {MAX_PAIRS}")
    return i, j, -np.expm1(-w), np.exp(-w)


def _chunks(k):
    total = 1 << k
    step = 1 << min(k, _CHUNK_BITS)
    shifts = np.arange(k, dtype=np.int64)
    for start in range(0, total, step):
        codes = np.arange(start, start + step, dtype=np.int64)
        yield codes, ((codes[:, None] >> shifts) & 1).astype(bool)


def _labels(n, i, j, bits):
    """Canonical labels (smallest member, 0-based) per configuration row."""
    lab = np.tile(np.arange(n, dtype=np.int64), (bits.shape[0], 1))
    a = i - 1
    b = j - 1
    changed = True
    while changed:
        changed = False
        for k in range(a.size):
            rows = np.flatnonzero(bits[:, k])
            la = lab[rows, a[k]]
            lb = lab[rows, b[k]]
            if np.any(la != lb):
                changed = True
                lo = np.minimum(la, lb)
                lab[rows, a[k]] = lo
                lab[rows, b[k]] = lo
    return lab


_CACHE_PAIRS = 18


class Enumeration:
    """All edge configurations of one instance, computed once.

    Chunks of (probabilities, labels, codes) are cached when there are at
    most ``2**18`` configurations and regenerated on each pass otherwise.
    """

    def __init__(self, x, relation: Relation, t):
        self.x = as_mass_vector(x)
        self.t = _check_t(t)
        self.relation = relation
        self.i, self.j, self.p, self.q = _admissible(self.x, relation, self.t)
        self._cache = None

    @property
    def pairs(self):
        return self.i.size

    def _generate(self):
        i, j, p, q = self.i, self.j, self.p, self.q
        for codes, bits in _chunks(i.size):
            probs = np.prod(np.where(bits, p, q), axis=1) if i.size else np.ones(1)
            yield probs, _labels(self.x.size, i, j, bits), codes

    def chunks(self):
        if self._cache is not None:
            return iter(self._cache)
        if self.pairs <= _CACHE_PAIRS:
            self._cache = list(self._generate())
            return iter(self._cache)
        return self._generate()

    def connect(self, vertex_set):
        """P(all of ``vertex_set`` lie in one component)."""
        vs = sorted({int(v) for v in vertex_set})
        if not vs:
            raise ValueError("vertex_set is empty")
        if vs[0] < 1 or vs[-1] > self.x.size:
            raise ValueError("vertices must lie in [1, len(x)]")
        if len(vs) == 1:
            return 1.0
        cols = np.array(vs) - 1
        parts = []
        for probs, lab, _ in self.chunks():
            together = np.all(lab[:, cols] == lab[:, cols[:1]], axis=1)
            parts.append(math.fsum(probs[together]))
        return math.fsum(parts)


def _configurations(x, relation, t):
    """Yield (probabilities, labels, codes) chunks over all configurations."""
    return Enumeration(x, relation, t).chunks()


def _component_rows(x, lab):
    rows = np.zeros(lab.shape)
    idx = np.arange(lab.shape[0])
    for v in range(x.size):
        rows[idx, lab[:, v]] += x[v]
    return -np.sort(-rows, axis=1)


def enumerate_law(x, relation: Relation, t):
    """Exact law of RMM_t(x; A, R) as an :class:`ExactDistribution`."""
    x = as_mass_vector(x)
    t = _check_t(t)
    i, j, p, _ = _admissible(x, relation, t)
    parts = {}
    reps = {}
    for probs, lab, _ in _configurations(x, relation, t):
        rows = _component_rows(x, lab)
        keys, inverse = np.unique(np.round(rows, _KEY_DECIMALS), axis=0, return_inverse=True)
        inverse = inverse.ravel()
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(keys.shape[0] + 1))
        for g in range(keys.shape[0]):
            members = order[bounds[g] : bounds[g + 1]]
            key = outcome_key(keys[g])
            parts.setdefault(key, []).append(math.fsum(probs[members]))
            reps.setdefault(key, rows[members[0]])
    outcomes = [(ComponentVector(reps[k]), math.fsum(v)) for k, v in parts.items()]
    outcomes.sort(key=lambda item: (-item[1], outcome_key(item[0].masses)))
    edge_probs = {(int(a), int(b)): float(c) for a, b, c in zip(i, j, p)}
    return ExactDistribution(outcomes=outcomes, edge_probs=edge_probs)


def connect_probability(x, relation: Relation, t, vertex_set):
    """P(all of ``vertex_set`` lie in one component)."""
    return Enumeration(x, relation, t).connect(vertex_set)


def _simple_paths(n_vertices, edges, a, b):
    """Edge bitmasks of every simple path from ``a`` to ``b``."""
    adj = {v: [] for v in range(1, n_vertices + 1)}
    for k, (u, v) in enumerate(edges):
        adj[u].append((v, k))
        adj[v].append((u, k))
    found = []

    def walk(v, seen, mask):
        if v == b:
            found.append(mask)
            return
        for w, k in adj[v]:
            if w not in seen:
                seen.add(w)
                walk(w, seen, mask | (1 << k))
                seen.discard(w)

    walk(a, {a}, 0)
    return found


def _minimal(masks):
    kept = []
    for m in sorted(set(masks), key=lambda v: (bin(v).count("1"), v)):
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def disjoint_witnesses(x, t, pair_list, relation: Relation = MAXIMAL, limit=2_000_000):
    """Minimal edge sets witnessing every ``{i_k ~ j_k}`` by edge-disjoint paths.

    Returns (admissible edge list, list of bitmasks over that list).
    """
    x = as_mass_vector(x)
    i, j, _, _ = _admissible(x, relation, _check_t(t))
    edges = list(zip(i.tolist(), j.tolist()))
    path_sets = []
    for a, b in pair_list:
        a, b = int(a), int(b)
        if a == b:
            raise ValueError("pairs must consist of distinct vertices")
        if not (1 <= a <= x.size and 1 <= b <= x.size):
            raise ValueError("vertices must lie in [1, len(x)]")
        path_sets.append(_minimal(_simple_paths(x.size, edges, a, b)))
    if math.prod(len(s) for s in path_sets) > limit:
        raise CapacityError("too many path systems to enumerate")
    witnesses = []

    def extend(k, used):
        if k == len(path_sets):
            witnesses.append(used)
            return
        for mask in path_sets[k]:
            if not mask & used:
                extend(k + 1, used | mask)

    extend(0, 0)
    return edges, _minimal(witnesses)


def disjoint_occurrence_probability(x, t, pair_list, relation: Relation = MAXIMAL):
    """P(every ``i_k ~ j_k`` occurs via mutually edge-disjoint open paths)."""
    pair_list = [tuple(p) for p in pair_list]
    if not pair_list:
        return 1.0
    x = as_mass_vector(x)
    _, witnesses = disjoint_witnesses(x, t, pair_list, relation)
    if not witnesses:
        return 0.0
    wit = np.array(witnesses, dtype=np.int64)
    parts = []
    for probs, _, codes in _configurations(x, relation, t):
        hit = np.zeros(codes.size, dtype=bool)
        for w in wit:
            hit |= (codes & w) == w
        parts.append(math.fsum(probs[hit]))
    return math.fsum(parts)


def partition_law(x, relation: Relation, t):
    """Exact law via dynamic programming over partitions (cross-check only).

    Edges are added one at a time and equal partitions are merged, so the
    cost depends on the number of partitions rather than ``2**K``.
    """
    x = as_mass_vector(x)
    i, j, p, q = _admissible(x, relation, _check_t(t))
    states = {tuple(range(x.size)): 1.0}
    for a, b, pk, qk in zip((i - 1).tolist(), (j - 1).tolist(), p.tolist(), q.tolist()):
        nxt = {}
        for lab, prob in states.items():
            nxt[lab] = nxt.get(lab, 0.0) + prob * qk
            la, lb = lab[a], lab[b]
            if la != lb:
                lo, hi = min(la, lb), max(la, lb)
                merged = tuple(lo if v == hi else v for v in lab)
            else:
                merged = lab
            nxt[merged] = nxt.get(merged, 0.0) + prob * pk
        states = nxt
    law = {}
    for lab, prob in states.items():
        sums = {}
        for v, l in enumerate(lab):
            sums[l] = sums.get(l, 0.0) + x[v]
        key = outcome_key(list(sums.values()))
        law[key] = law.get(key, 0.0) + prob
    return law

