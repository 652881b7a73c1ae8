"""Symmetric relations on the positive integers.

Relations are predicate expressions, never materialised (except
:class:`ExplicitEdgeSet`).  Every kind answers ``contains(i, j)`` and a
vectorised ``mask(i, j)``; ``pairs(n)`` lists the related pairs inside
``[n]`` in lexicographic order.  Loops are never related.

Text spelling, as accepted by :func:`parse_relation`::

    maximal | empty | intra:m,l | inter:m | shift:m(<rel>) | updown:m(<rel>)
    | union(<rel>,<rel>) | edges:1-2;2-3
"""

import re
from dataclasses import dataclass

import numpy as np


def _triu(n):
    i, j = np.triu_indices(n, 1)
    return i.astype(np.int64) + 1, j.astype(np.int64) + 1


class Relation:
    def mask(self, i, j):
        raise NotImplementedError

    def contains(self, i, j):
        i = int(i)
        j = int(j)
        if i == j:
            return False
        return bool(self.mask(np.array([i]), np.array([j]))[0])

    def pairs(self, n):
        """Related pairs ``i < j <= n`` as two int64 arrays, lexicographic."""
        i, j = _triu(n)
        keep = self.mask(i, j)
        return i[keep], j[keep]

    def enumerate_within(self, n):
        if n < 1:
            raise ValueError("n must be a positive integer")
        i, j = self.pairs(n)
        for a, b in zip(i.tolist(), j.tolist()):
            yield a, b

    def __or__(self, other):
        return Union(self, other)


@dataclass(frozen=True)
class Maximal(Relation):
    def mask(self, i, j):
        return np.asarray(i) != np.asarray(j)

    def pairs(self, n):
        return _triu(n)

    def __str__(self):
        return "maximal"


@dataclass(frozen=True)
class Empty(Relation):
    def mask(self, i, j):
        return np.zeros(np.broadcast(np.asarray(i), np.asarray(j)).shape, dtype=bool)

    def pairs(self, n):
        return np.empty(0, np.int64), np.empty(0, np.int64)

    def __str__(self):
        return "empty"


@dataclass(frozen=True)
class IntraClass(Relation):
    """Pairs inside the class ``B_l = {l, m+l, 2m+l, ...}``."""

    m: int
    l: int

    def __post_init__(self):
        if self.m < 1 or not 1 <= self.l <= self.m:
            raise ValueError(f"need m >= 1 and 1 <= l <= m, got m={self.m}, l={self.l}")

    def mask(self, i, j):
        i = np.asarray(i)
        j = np.asarray(j)
        return (i != j) & ((i - self.l) % self.m == 0) & ((j - self.l) % self.m == 0)

    def pairs(self, n):
        members = np.arange(self.l, n + 1, self.m, dtype=np.int64)
        a, b = np.triu_indices(members.size, 1)
        return members[a], members[b]

    def __str__(self):
        return f"intra:{self.m},{self.l}"


@dataclass(frozen=True)
class InterClass(Relation):
    """Pairs in different classes: ``(i - j) mod m != 0``."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")

    def mask(self, i, j):
        return (np.asarray(i) - np.asarray(j)) % self.m != 0

    def __str__(self):
        return f"inter:{self.m}"


@dataclass(frozen=True)
class Shifted(Relation):
    """``{i, j}`` related iff ``{i+m, j+m}`` is related in ``base``."""

    base: Relation
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("shift must be nonnegative")

    def mask(self, i, j):
        return self.base.mask(np.asarray(i) + self.m, np.asarray(j) + self.m)

    def __str__(self):
        return f"shift:{self.m}({self.base})"


@dataclass(frozen=True)
class UpDown(Relation):
    """Pairs of ``base`` crossing the cut: ``min(i,j) <= m < max(i,j)``."""

    base: Relation
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("cut must be nonnegative")

    def mask(self, i, j):
        i = np.asarray(i)
        j = np.asarray(j)
        cross = (np.minimum(i, j) <= self.m) & (np.maximum(i, j) > self.m)
        return cross & self.base.mask(i, j)

    def pairs(self, n):
        if self.m >= n or self.m == 0:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        i, j = np.meshgrid(
            np.arange(1, self.m + 1, dtype=np.int64),
            np.arange(self.m + 1, n + 1, dtype=np.int64),
            indexing="ij",
        )
        i = i.ravel()
        j = j.ravel()
        keep = self.base.mask(i, j)
        return i[keep], j[keep]

    def __str__(self):
        return f"updown:{self.m}({self.base})"


@dataclass(frozen=True)
class Union(Relation):
    a: Relation
    b: Relation

    def mask(self, i, j):
        return self.a.mask(i, j) | self.b.mask(i, j)

    def __str__(self):
        return f"union({self.a},{self.b})"


@dataclass(frozen=True)
class ExplicitEdgeSet(Relation):
    """A finite relation listed edge by edge (stored as sorted pairs)."""

    edges: frozenset

    def __init__(self, edges):
        norm = set()
        for a, b in edges:
            a = int(a)
            b = int(b)
            if a < 1 or b < 1:
                raise ValueError("vertex indices are positive integers")
            if a != b:
                norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    def _codes(self):
        return np.array(sorted(a * (1 << 32) + b for a, b in self.edges), dtype=np.int64)

    def mask(self, i, j):
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        codes = np.minimum(i, j) * (1 << 32) + np.maximum(i, j)
        return np.isin(codes, self._codes()) & (i != j)

    def pairs(self, n):
        inside = sorted(e for e in self.edges if e[1] <= n)
        if not inside:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        arr = np.array(inside, dtype=np.int64)
        return arr[:, 0], arr[:, 1]

    def __str__(self):
        return "edges:" + ";".join(f"{a}-{b}" for a, b in sorted(self.edges))


MAXIMAL = Maximal()
EMPTY = Empty()

_TOKEN = re.compile(r"\s*(maximal|empty|intra|inter|shift|updown|union|edges|\d+|[:,()\-;])")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if not match:
                if text[pos:].strip() == "":
                    break
                raise ValueError(f"cannot parse relation {text!r} at offset {pos}")
            self.tokens.append(match.group(1))
            pos = match.end()
        self.k = 0

    def peek(self):
        return self.tokens[self.k] if self.k < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"cannot parse relation {self.text!r}: expected {expected!r}, got {tok!r}")
        self.k += 1
        return tok

    def integer(self):
        tok = self.take()
        if not tok.isdigit():
            raise ValueError(f"cannot parse relation {self.text!r}: expected integer, got {tok!r}")
        return int(tok)

    def relation(self):
        head = self.take()
        if head == "maximal":
            return MAXIMAL
        if head == "empty":
            return EMPTY
        if head == "intra":
            self.take(":")
            m = self.integer()
            self.take(",")
            return IntraClass(m, self.integer())
        if head == "inter":
            self.take(":")
            return InterClass(self.integer())
        if head in ("shift", "updown"):
            self.take(":")
            m = self.integer()
            self.take("(")
            base = self.relation()
            self.take(")")
            return Shifted(base, m) if head == "shift" else UpDown(base, m)
        if head == "union":
            self.take("(")
            a = self.relation()
            self.take(",")
            b = self.relation()
            self.take(")")
            return Union(a, b)
        if head == "edges":
            self.take(":")
            edges = []
            while self.peek() is not None and self.peek().isdigit():
                a = self.integer()
                self.take("-")
                edges.append((a, self.integer()))
                if self.peek() == ";":
                    self.take(";")
            return ExplicitEdgeSet(edges)
        raise ValueError(f"cannot parse relation {self.text!r}: unexpected {head!r}")


def parse_relation(text):
    parser = _Parser(text)
    rel = parser.relation()
    if parser.peek() is not None:
        raise ValueError(f"trailing input in relation {text!r}")
    return rel
