import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmmsim.relations import (
    EMPTY,
    MAXIMAL,
    ExplicitEdgeSet,
    InterClass,
    IntraClass,
    Shifted,
    Union,
    UpDown,
    parse_relation,
)


def reference(rel, i, j):
    """Membership written straight from the definitions, one pair at a time."""
    if i == j:
        return False
    kind = type(rel).__name__
    if kind == "Maximal":
        return True
    if kind == "Empty":
        return False
    if kind == "IntraClass":
        block = set(range(rel.l, 10**4, rel.m))
        return i in block and j in block
    if kind == "InterClass":
        return (i - j) % rel.m != 0
    if kind == "Shifted":
        return reference(rel.base, i + rel.m, j + rel.m)
    if kind == "UpDown":
        return reference(rel.base, i, j) and min(i, j) <= rel.m < max(i, j)
    if kind == "Union":
        return reference(rel.a, i, j) or reference(rel.b, i, j)
    if kind == "ExplicitEdgeSet":
        return (min(i, j), max(i, j)) in rel.edges
    raise AssertionError(kind)


def _intra(draw_m):
    return draw_m.flatmap(lambda m: st.integers(1, m).map(lambda l: IntraClass(m, l)))


leaves = st.one_of(
    st.just(MAXIMAL),
    st.just(EMPTY),
    _intra(st.integers(1, 4)),
    st.integers(1, 4).map(InterClass),
    st.sets(st.tuples(st.integers(1, 9), st.integers(1, 9)), max_size=8).map(ExplicitEdgeSet),
)
relations = st.recursive(
    leaves,
    lambda inner: st.one_of(
        st.tuples(inner, st.integers(0, 4)).map(lambda a: Shifted(*a)),
        st.tuples(inner, st.integers(0, 6)).map(lambda a: UpDown(*a)),
        st.tuples(inner, inner).map(lambda a: Union(*a)),
    ),
    max_leaves=4,
)


@given(relations, st.integers(1, 9))
def test_membership_matches_definitions(rel, n):
    for i in range(1, n + 1):
        assert not rel.contains(i, i)
        for j in range(i + 1, n + 1):
            assert rel.contains(i, j) == rel.contains(j, i) == reference(rel, i, j)


@given(relations, st.integers(1, 9))
def test_enumeration_is_lexicographic_membership(rel, n):
    listed = list(rel.enumerate_within(n))
    expected = [(i, j) for i, j in itertools.combinations(range(1, n + 1), 2) if reference(rel, i, j)]
    assert listed == expected


@given(relations)
def test_spelling_round_trip(rel):
    again = parse_relation(str(rel))
    for i, j in itertools.combinations(range(1, 10), 2):
        assert again.contains(i, j) == rel.contains(i, j)


@given(relations, st.integers(0, 4), st.integers(0, 4))
def test_shift_composes(rel, a, b):
    lhs = Shifted(Shifted(rel, a), b)
    rhs = Shifted(rel, a + b)
    for i, j in itertools.combinations(range(1, 9), 2):
        assert lhs.contains(i, j) == rhs.contains(i, j)


@pytest.mark.parametrize("m", range(1, 7))
def test_union_with_crossing_pairs_table(m):
    base = InterClass(2)
    combined = Union(base, UpDown(MAXIMAL, m))
    for i, j in itertools.combinations(range(1, 2 * m + 1), 2):
        crossing = i <= m < j
        assert combined.contains(i, j) == (base.contains(i, j) or crossing)


def test_examples():
    assert MAXIMAL.contains(2, 9)
    assert not InterClass(3).contains(3, 6)
    assert InterClass(3).contains(3, 5)
    b1 = IntraClass(3, 1)
    assert b1.contains(1, 4) and b1.contains(4, 7)
    assert not b1.contains(1, 2)
    assert list(MAXIMAL.enumerate_within(3)) == [(1, 2), (1, 3), (2, 3)]
    assert list(EMPTY.enumerate_within(100)) == []
    assert list(UpDown(MAXIMAL, 2).enumerate_within(4)) == [(1, 3), (1, 4), (2, 3), (2, 4)]


def test_explicit_edges_drop_loops_and_normalise():
    rel = ExplicitEdgeSet([(3, 1), (2, 2), (1, 3)])
    assert rel.edges == frozenset({(1, 3)})
    i, j = rel.pairs(2)
    assert i.size == 0
    with pytest.raises(ValueError):
        ExplicitEdgeSet([(0, 1)])


def test_vector_mask_matches_contains():
    rel = Union(IntraClass(3, 2), UpDown(InterClass(2), 3))
    i, j = np.meshgrid(np.arange(1, 12), np.arange(1, 12), indexing="ij")
    mask = rel.mask(i, j) & (i != j)
    for a in range(11):
        for b in range(11):
            assert mask[a, b] == rel.contains(a + 1, b + 1)


@pytest.mark.parametrize("text", ["", "intra:3", "inter:", "shift:2(maximal", "union(maximal)", "maximal empty", "bogus"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_relation(text)


def test_constructor_errors():
    with pytest.raises(ValueError):
        IntraClass(3, 4)
    with pytest.raises(ValueError):
        InterClass(0)
    with pytest.raises(ValueError):
        Shifted(MAXIMAL, -1)
