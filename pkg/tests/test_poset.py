from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsemetric.errors import HypothesisError
from coarsemetric.fixtures import bowtie, diamond, m3, n5
from coarsemetric.poset import INF, MonotoneMap, Poset, inclusion_poset, leq_ext
from coarsemetric.relset import GroundSet, Relation, diagonal


@st.composite
def posets(draw, max_m=6):
    """Random posets from random pairs between a shuffled order, closed transitively."""
    m = draw(st.integers(1, max_m))
    perm = draw(st.permutations(range(m)))
    pairs = draw(st.lists(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)), max_size=2 * m))
    # orient every pair along the permutation so no cycle can form
    rank = {e: i for i, e in enumerate(perm)}
    oriented = [(a, b) if rank[a] <= rank[b] else (b, a) for a, b in pairs]
    return Poset.from_pairs(m, oriented)


def test_leq_ext_with_infinity():
    p = Poset.chain(3)
    assert all(leq_ext(p.zero, k, p) for k in range(3))
    assert not leq_ext(INF, 2, p)
    assert leq_ext(INF, INF, p)
    assert leq_ext(1, INF, p)
    with pytest.raises(ValueError):
        leq_ext(7, 1, p)


def test_rejects_cycles():
    with pytest.raises(ValueError):
        Poset.from_pairs(2, [(0, 1), (1, 0)])


def test_upward_directed_examples():
    vee = Poset.from_pairs(3, [(0, 1), (0, 2)])
    assert not vee.is_upward_directed()
    assert diamond().is_upward_directed()
    assert Poset.chain(4).is_upward_directed()


def test_d_index_examples():
    assert Poset.chain(3).is_d_index()
    assert not Poset.chain(1).is_d_index()
    assert not Poset.from_pairs(3, [(0, 1), (0, 2)]).is_d_index()
    with pytest.raises(HypothesisError):
        Poset.from_pairs(2, []).is_d_index()


def test_meets():
    c = Poset.chain(4)
    assert c.meet([1, 3, 2]) == 1
    d = diamond()
    assert d.meet([1, 2]) == 0
    assert d.is_meet_complete()
    b = bowtie()
    assert b.meet([3, 4]) is None
    assert not b.is_meet_complete()
    with pytest.raises(ValueError):
        c.meet([])


def test_total_order_and_complete_lattice():
    c = Poset.chain(3)
    assert c.is_totally_ordered() and c.is_complete_lattice()
    d = diamond()
    assert not d.is_totally_ordered()
    assert d.is_complete_lattice()
    assert m3().is_complete_lattice() and n5().is_complete_lattice()


def test_with_top_adds_a_largest_element():
    b = bowtie()
    assert not b.is_complete_lattice()
    # adding a top gives c, d a join but their meet is still ambiguous
    assert not b.is_complete_lattice(extended=True)
    vee = Poset.from_pairs(3, [(0, 1), (0, 2)])
    assert vee.is_complete_lattice(extended=True)


def test_inclusion_poset_examples():
    g = GroundSet(4)
    d = diagonal(g)
    e1 = d | Relation.from_pairs(g, [(0, 1), (1, 0)])
    e2 = d | Relation.from_pairs(g, [(2, 3), (3, 2)])
    one = inclusion_poset([d])
    assert one.m == 1 and one.zero == 0
    two = inclusion_poset([e1, d])
    assert two.is_totally_ordered() and two.elements[two.zero] == d
    dia = inclusion_poset([d, e1, e2, e1 | e2])
    assert dia.m == 4 and not dia.is_totally_ordered() and dia.is_complete_lattice()
    assert dia.meet([dia.index_of(e1), dia.index_of(e2)]) == dia.index_of(d)
    with pytest.raises(ValueError):
        inclusion_poset([])


def test_monotone_map():
    c = Poset.chain(3)
    inc = MonotoneMap(c, c, (0, 0, 2), require_increasing=True)
    assert inc.is_increasing()
    assert inc.extended(INF) is INF
    with pytest.raises(ValueError):
        MonotoneMap(c, c, (2, 0, 1), require_increasing=True)
    assert MonotoneMap.identity(c).table == (0, 1, 2)


@given(posets())
def test_pairwise_meet_check_matches_exhaustive(p):
    assert p.is_meet_complete() == p.is_meet_complete_exhaustive()


@given(posets(), st.data())
def test_meet_is_greatest_lower_bound(p, data):
    subset = data.draw(st.sets(st.integers(0, p.m - 1), min_size=1))
    m = p.meet(subset)
    lower = [x for x in range(p.m) if all(p.leq(x, s) for s in subset)]
    if m is None:
        assert not any(all(p.leq(y, x) for y in lower) for x in lower)
    else:
        assert m in lower and all(p.leq(y, m) for y in lower)


@given(posets())
def test_linear_extension_respects_order(p):
    pos = {a: i for i, a in enumerate(p.linear_extension)}
    assert sorted(pos) == list(range(p.m))
    for a in range(p.m):
        for b in range(p.m):
            if p.lt(a, b):
                assert pos[a] < pos[b]


def test_intersection_closed_family_gives_meet_complete_poset():
    g = GroundSet(3)
    d = diagonal(g)
    fam = [d, d | Relation.from_pairs(g, [(0, 1), (1, 0)]), d | Relation.from_pairs(g, [(1, 2), (2, 1)])]
    closed = {a & b for a in fam for b in fam} | set(fam)
    p = inclusion_poset(closed)
    assert p.is_meet_complete()
    for k in range(1, p.m + 1):
        for sub in combinations(range(p.m), k):
            inter = p.elements[sub[0]]
            for s in sub[1:]:
                inter = inter & p.elements[s]
            assert p.elements[p.meet(sub)] == inter
