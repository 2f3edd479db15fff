import oracles
import pytest
from conftest import relation_triples, relations
from hypothesis import given
from hypothesis import strategies as st

from coarsemetric.errors import CapacityError, GroundMismatchError
from coarsemetric.relset import (
    GroundSet,
    Relation,
    all_relations,
    canonical,
    diagonal,
    intersect_all,
    symmetric_reflexive_subsets,
    union_all,
)


def rel(n, *pairs):
    return Relation.from_pairs(GroundSet(n), pairs)


def test_diagonal_small():
    assert set(diagonal(GroundSet(1))) == {(0, 0)}
    assert set(diagonal(GroundSet(3))) == {(0, 0), (1, 1), (2, 2)}


def test_ground_set_rejects_empty_and_bad_labels():
    with pytest.raises(ValueError):
        GroundSet(0)
    with pytest.raises(ValueError):
        GroundSet(2, ("a", "a"))
    with pytest.raises(ValueError):
        GroundSet(2, ("a",))


def test_ground_cap_is_read_from_environment(monkeypatch):
    monkeypatch.setenv("COARSEMETRIC_MAX_GROUND", "3")
    with pytest.raises(CapacityError):
        GroundSet(4)
    monkeypatch.delenv("COARSEMETRIC_MAX_GROUND")
    assert GroundSet(4).n == 4


def test_inverse_examples():
    assert rel(2, (0, 1)).inverse() == rel(2, (1, 0))
    g = GroundSet(3)
    assert diagonal(g).inverse() == diagonal(g)
    assert rel(3, (0, 1), (1, 0), (2, 0)).inverse() == rel(3, (1, 0), (0, 1), (0, 2))


def test_compose_example_on_four_points():
    g = GroundSet(4)
    d = diagonal(g)
    e1 = d | Relation.from_pairs(g, [(0, 1), (1, 0)])
    e2 = d | Relation.from_pairs(g, [(1, 2), (2, 1)])
    expected = d | Relation.from_pairs(g, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2)])
    assert e1.compose(e2) == expected
    assert set(expected) == set(oracles.compose(set(e1), set(e2)))


def test_compose_order_and_empty():
    assert rel(2, (0, 1)).compose(rel(2, (0, 1))) == Relation.empty(GroundSet(2))
    # (0,1) then (1,0) gives (0,0); the other order gives (1,1)
    assert set(rel(2, (0, 1)).compose(rel(2, (1, 0)))) == {(0, 0)}
    assert set(rel(2, (1, 0)).compose(rel(2, (0, 1)))) == {(1, 1)}


def test_compose_rejects_other_ground():
    with pytest.raises(GroundMismatchError):
        rel(2, (0, 1)).compose(rel(3, (0, 1)))


def test_image_examples():
    g = GroundSet(3)
    b = diagonal(g) | Relation.from_pairs(g, [(0, 1), (1, 0)])
    assert b.image({1}) == {0, 1}
    assert diagonal(g).image({0, 2}) == {0, 2}
    assert Relation.empty(g).image({0, 1, 2}) == frozenset()
    with pytest.raises(ValueError):
        b.image({3})


def test_boolean_ops():
    a, b = rel(2, (0, 1)), rel(2, (1, 0))
    assert a | b == rel(2, (0, 1), (1, 0))
    assert a & a == a
    assert (a | b) - a == b
    assert diagonal(GroundSet(2)).is_subset(diagonal(GroundSet(2)) | a)


def test_symmetrizations():
    a = rel(2, (0, 1))
    assert a.symmetrize_cap() == diagonal(GroundSet(2))
    assert a.symmetrize_cup() == rel(2, (0, 0), (1, 1), (0, 1), (1, 0))
    b = rel(3, (0, 1), (1, 0), (0, 2))
    assert b.symmetrize_cap() == diagonal(GroundSet(3)) | rel(3, (0, 1), (1, 0))


def test_key_round_trip_and_canonical_order():
    g = GroundSet(2)
    rels = list(all_relations(g))
    assert len(rels) == 16
    assert all(Relation.from_key(g, r.key) == r for r in rels)
    assert canonical(rels + rels) == sorted(set(rels), key=Relation.sort_key)


def test_intersect_and_union_all():
    g = GroundSet(3)
    a, b = rel(3, (0, 1), (1, 2)), rel(3, (0, 1), (2, 2))
    assert intersect_all([a, b]) == rel(3, (0, 1))
    assert union_all([a, b], g) == a | b
    assert union_all([], g) == Relation.empty(g)


def test_symmetric_reflexive_subsets_count():
    g = GroundSet(4)
    # six unordered off-diagonal pairs
    assert len(list(symmetric_reflexive_subsets(Relation.full(g)))) == 64
    subs = symmetric_reflexive_subsets(diagonal(g) | rel(4, (0, 1), (1, 0), (0, 2)))
    assert len(list(subs)) == 2


@given(relations())
def test_inverse_is_involution(a):
    assert a.inverse().inverse() == a
    assert set(a.inverse()) == oracles.inverse(set(a))


@given(relation_triples())
def test_compose_associative_and_matches_oracle(t):
    a, b, c = t
    assert a.compose(b).compose(c) == a.compose(b.compose(c))
    assert set(a.compose(b)) == oracles.compose(set(a), set(b))


@given(relation_triples())
def test_compose_distributes_over_union(t):
    a, b, c = t
    assert a.compose(b | c) == a.compose(b) | a.compose(c)


@given(relation_triples(), st.data())
def test_image_of_composition(t, data):
    a, b, _ = t
    s = data.draw(st.sets(st.integers(0, a.ground.n - 1)))
    assert a.compose(b).image(s) == b.image(a.image(s))
    assert a.image(s) == oracles.image(set(a), s)


@given(relations())
def test_cap_inside_cup(a):
    cap, cup = a.symmetrize_cap(), a.symmetrize_cup()
    assert cap <= cup
    # the diagonal is added by both, so only the off-diagonal part matters
    assert (cap == cup) == (a | diagonal(a.ground)).is_symmetric()
    for r in (cap, cup):
        assert r.is_symmetric() and r.is_reflexive()


@given(relations())
def test_cap_equals_cup_iff_symmetric_when_reflexive(a):
    a = a | diagonal(a.ground)
    assert (a.symmetrize_cap() == a.symmetrize_cup()) == a.is_symmetric()
