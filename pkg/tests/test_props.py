import math

import oracles
import pytest
from conftest import inducing_metrics, space_maps, structures
from hypothesis import given
from hypothesis import strategies as st

from coarsemetric import structural
from coarsemetric.coarse import CoarseStructure, saturated_metric, structure_from_metric
from coarsemetric.errors import HypothesisError
from coarsemetric.fixtures import (
    absolute_difference,
    e1_structure,
    pairing_structure,
    truncated_line,
)
from coarsemetric.props import (
    SpaceMap,
    are_close,
    bounded_geometry_report,
    cap,
    check_sandwich,
    ent,
    is_bornologous,
    is_bornologous_by_domination,
    is_bounded,
    is_coarsely_connected,
    is_effectively_proper,
    is_effectively_proper_by_domination,
    is_proper,
    pullback,
)
from coarsemetric.relset import GroundSet, Relation, all_symmetric_reflexive, diagonal


def constant(source, target, value=0):
    return SpaceMap(source, target, (value,) * source.n)


# cap and ent


def test_cap_examples():
    g = GroundSet(4)
    assert cap(Relation.full(g), range(4)) == 1
    assert cap(diagonal(g), [0, 2, 3]) == 3
    _, e = pairing_structure()
    assert cap(e, range(4)) == 2
    assert cap(e, []) == 0


def test_ent_examples():
    g = GroundSet(4)
    _, e = pairing_structure()
    assert ent(e, range(4)) == 2
    assert ent(e, []) == 0
    # point 3 lies in no E[x] when E misses the diagonal there
    assert ent(Relation.from_pairs(g, [(0, 1), (1, 0)]), [3]) == math.inf
    assert ent(Relation.full(g), range(4)) == 1


def test_cap_and_ent_match_brute_force():
    g = GroundSet(4)
    for e in all_symmetric_reflexive(g):
        pairs = set(e)
        for mask in range(16):
            s = [x for x in range(4) if mask >> x & 1]
            assert cap(e, s) == oracles.cap(pairs, s)
            assert ent(e, s) == oracles.ent(pairs, s, 4)


@given(st.data())
def test_cap_is_antitone_in_relation_and_monotone_in_set(data):
    g = GroundSet(4)
    sr = all_symmetric_reflexive(g)
    e = data.draw(st.sampled_from(sr))
    bigger = data.draw(st.sampled_from([r for r in sr if e <= r]))
    s = data.draw(st.sets(st.integers(0, 3)))
    t = s | data.draw(st.sets(st.integers(0, 3)))
    assert cap(bigger, s) <= cap(e, s)
    assert cap(e, s) <= cap(e, t)


def test_sandwich_on_three_and_four_points():
    for n in (3, 4):
        assert check_sandwich(GroundSet(n), all_symmetric_reflexive(GroundSet(n))) == []


# bounded geometry


def test_bounded_geometry_minimal_structure():
    g = GroundSet(3)
    s = CoarseStructure.minimal(g)
    d = saturated_metric(s)
    rep = bounded_geometry_report(s, d)
    assert d.index.elements[rep.alpha1] == diagonal(g)
    assert set(rep.n1.values()) == {1} and set(rep.n2.values()) == {1} and set(rep.n3.values()) == {1}
    assert all(rep.verdicts.values())


def test_bounded_geometry_pairing_structure():
    s, e = pairing_structure()
    d = saturated_metric(s)
    rep = bounded_geometry_report(s, d)
    assert rep.n1[d.index.index_of(e)] == 2
    assert rep.transformed_ok and rep.sandwich_ok and rep.sandwich_checked > 0
    assert rep.lines(d.index.label)[0].startswith("B1 holds")


def test_bounded_geometry_rejects_foreign_metric():
    s, _ = pairing_structure()
    with pytest.raises(HypothesisError):
        bounded_geometry_report(s, saturated_metric(CoarseStructure.maximal(s.ground)))


# Prop-style checks, metric side


def test_coarse_connectivity_examples():
    g = GroundSet(4)
    assert is_coarsely_connected(CoarseStructure.maximal(g), saturated_metric(CoarseStructure.maximal(g)))
    s, _ = e1_structure()
    assert not is_coarsely_connected(s, saturated_metric(s))
    d_i, d_j = truncated_line()
    # the top of J is an ordinary index value, so d_J is finite everywhere
    assert is_coarsely_connected(structure_from_metric(d_j), d_j)
    assert not is_coarsely_connected(structure_from_metric(d_i), d_i)


def test_boundedness_examples():
    s, _ = e1_structure()
    d = saturated_metric(s)
    assert is_bounded(s, d, [2]) == (2, d.zero)
    assert is_bounded(s, d, [0, 2]) is None
    assert is_bounded(s, d, [0, 1]) is not None
    m = CoarseStructure.maximal(s.ground)
    assert is_bounded(m, saturated_metric(m), range(4)) is not None
    with pytest.raises(ValueError):
        is_bounded(s, d, [])


def test_bornologous_examples():
    s, _ = e1_structure()
    g = s.ground
    d = saturated_metric(s)
    assert is_bornologous(SpaceMap.identity(g), d, d)
    assert is_bornologous(constant(g, g), d, d)
    dm = saturated_metric(CoarseStructure.maximal(g))
    assert not is_bornologous(SpaceMap.identity(g), dm, d)
    assert is_bornologous(SpaceMap.identity(g), d, dm)


def test_proper_examples():
    s, _ = e1_structure()
    g = s.ground
    d = saturated_metric(s)
    dm = saturated_metric(CoarseStructure.maximal(g))
    assert is_proper(SpaceMap(g, g, (1, 0, 3, 2)), dm, dm) is not None
    assert is_proper(constant(g, g), d, dm) is None
    ident = is_proper(SpaceMap.identity(g), d, d)
    for (y, b), (x, a) in ident.items():
        # any covering ball is a valid witness, (y, b) itself included
        assert d.ball(y, b) <= d.ball(x, a)


def test_effectively_proper_examples():
    s, _ = e1_structure()
    g = s.ground
    d = saturated_metric(s)
    dm = saturated_metric(CoarseStructure.maximal(g))
    assert is_effectively_proper(SpaceMap.identity(g), d, d)
    assert not is_effectively_proper(SpaceMap.identity(g), d, dm)
    dmin = saturated_metric(CoarseStructure.minimal(g))
    # Δ_Y pulls back to X × X, which is controlled only in the maximal source
    assert is_effectively_proper(constant(g, g), dm, dmin)
    assert not is_effectively_proper(constant(g, g), d, dmin)


def test_closeness_examples():
    d = absolute_difference(4)
    g = d.ground
    f = SpaceMap.identity(g)
    assert are_close(f, f, d) == d.zero
    assert are_close(f, SpaceMap(g, g, (0, 1, 2, 1)), d) == 2
    s, _ = e1_structure()
    assert are_close(f, SpaceMap(g, g, (0, 1, 2, 0)), saturated_metric(s)) is None


def test_pullback_values():
    d = absolute_difference(4)
    f = SpaceMap(GroundSet(2), d.ground, (0, 3))
    assert pullback(d, f)(0, 1) == 3


# metric side against structural side


@st.composite
def fixtures(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    sx, sy = draw(structures(n=n)), draw(structures(n=m))
    dx, dy = draw(inducing_metrics(sx)), draw(inducing_metrics(sy))
    f = draw(space_maps(sx.ground, sy.ground))
    g = draw(space_maps(sx.ground, sy.ground))
    return sx, sy, dx, dy, f, g


@given(fixtures())
def test_metric_checks_agree_with_structural_definitions(fx):
    sx, sy, dx, dy, f, g = fx
    assert is_coarsely_connected(sx, dx) == structural.is_coarsely_connected(sx)
    for mask in range(1, 1 << sx.ground.n):
        sub = [x for x in sx.ground if mask >> x & 1]
        assert (is_bounded(sx, dx, sub) is not None) == structural.is_bounded(sx, sub)
    born = structural.is_bornologous(f, sx, sy)
    assert is_bornologous(f, dx, dy) == born == is_bornologous_by_domination(f, dx, dy)
    assert (is_proper(f, dx, dy) is not None) == structural.is_proper(f, sx, sy)
    eff = structural.is_effectively_proper(f, sx, sy)
    assert is_effectively_proper(f, dx, dy) == eff == is_effectively_proper_by_domination(f, dx, dy)
    assert (are_close(f, g, dy) is not None) == structural.are_close(f, g, sy)
