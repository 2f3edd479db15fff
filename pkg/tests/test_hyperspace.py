import oracles
import pytest
from conftest import chain_metrics
from hypothesis import given
from hypothesis import strategies as st

from coarsemetric.coarse import (
    CoarseStructure,
    generate,
    metric_from_base,
    saturated_metric,
    structure_from_metric,
)
from coarsemetric.errors import CapacityError, HypothesisError
from coarsemetric.fixtures import (
    absolute_difference,
    diamond,
    e1_structure,
    pair_relation,
)
from coarsemetric.hyperspace import (
    Hyperspace,
    SearchReport,
    check_entourage,
    compare_hausdorff,
    hausdorff_cert,
    hausdorff_metric,
    hausdorff_structure,
    search_counterexample,
    verify_hausdorff_agreement,
)
from coarsemetric.metric import GenMetric
from coarsemetric.poset import INF, Poset, leq_ext
from coarsemetric.relset import GroundSet, Relation, all_symmetric_reflexive, diagonal


def hyper_pairs(hs, e):
    """``Ě`` from the set-of-pairs oracle."""
    pairs = set(e)
    return {
        (i, j)
        for i in range(hs.ground.n)
        for j in range(hs.ground.n)
        if oracles.hausdorff_pair(pairs, hs.subset(i), hs.subset(j))
    }


def oracle_top(n, generators):
    """Largest member of the structure generated by ``generators`` (union of the closure)."""
    stable = {oracles.diagonal(n)} | {oracles.sym_cup(g, n) for g in generators}
    while True:
        new = set(stable)
        for a in stable:
            for b in stable:
                new.add(a | b)
                new.add(oracles.compose(a, b))
        if new == stable:
            return frozenset().union(*stable)
        stable = new


def test_hyperspace_layout_and_cap(monkeypatch):
    hs = Hyperspace(GroundSet(3))
    assert hs.ground.n == 7
    assert [hs.singleton(x) for x in range(3)] == [0, 1, 2]
    assert hs.subset(hs.index([0, 2])) == {0, 2}
    with pytest.raises(ValueError):
        hs.index([])
    with pytest.raises(CapacityError):
        Hyperspace(GroundSet(5))
    monkeypatch.setenv("COARSEMETRIC_MAX_HYPERSPACE", "2")
    with pytest.raises(CapacityError):
        Hyperspace(GroundSet(3))


def test_check_entourage_examples():
    g = GroundSet(3)
    hs = Hyperspace(g)
    assert check_entourage(diagonal(g), hs) == diagonal(hs.ground)
    assert check_entourage(Relation.full(g), hs) == Relation.full(hs.ground)
    f = check_entourage(pair_relation(g, (0, 1)), hs)
    i = hs.index
    assert (i([0]), i([1])) in f
    assert (i([0]), i([2])) not in f
    assert (i([0]), i([0, 1])) in f


def test_check_entourage_matches_oracle_on_all_relations():
    g = GroundSet(3)
    hs = Hyperspace(g)
    for e in all_symmetric_reflexive(g):
        assert set(check_entourage(e, hs)) == hyper_pairs(hs, e)


@given(st.data())
def test_check_is_monotone(data):
    g = GroundSet(3)
    sr = all_symmetric_reflexive(g)
    e = data.draw(st.sampled_from(sr))
    f = data.draw(st.sampled_from([r for r in sr if e <= r]))
    assert check_entourage(e) <= check_entourage(f)


def test_hausdorff_structure_examples():
    g = GroundSet(3)
    hs = Hyperspace(g)
    minimal = hausdorff_structure(CoarseStructure.minimal(g), hs=hs)
    assert minimal == CoarseStructure.minimal(hs.ground)
    s, e1 = e1_structure(3)
    got = hausdorff_structure(s, hs=hs)
    gens = [frozenset(check_entourage(r, hs)) for r in (diagonal(g), e1)]
    assert set(got.top) == oracle_top(hs.ground.n, gens)


def test_base_and_full_paths_agree():
    for n in (2, 3):
        g = GroundSet(n)
        for r in all_symmetric_reflexive(g):
            s = generate(g, [r])
            assert hausdorff_structure(s, base=[s.top]) == hausdorff_structure(s)


# the Hausdorff metric


def two_chain_metric():
    g = GroundSet(3)
    f = pair_relation(g, (0, 1))
    return metric_from_base([f, diagonal(g)])


def test_hausdorff_metric_examples():
    d = two_chain_metric()
    hs = Hyperspace(d.ground)
    dh = hausdorff_metric(d, hs)
    i = hs.index
    f_idx = d.index.index_of(pair_relation(d.ground, (0, 1)))
    assert dh(i([0]), i([1])) == f_idx
    assert dh(i([0]), i([2])) is INF
    assert dh(i([0, 1]), i([0])) == f_idx
    assert all(dh(r, r) == d.zero for r in range(hs.ground.n))


def test_hausdorff_metric_needs_meets():
    # 0 < a, b < c, d < 1: c and d have two maximal common lower bounds
    p = Poset.from_pairs(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)])
    assert not p.is_meet_complete()
    d = GenMetric(GroundSet(2), p, ((0, 5), (5, 0)))
    with pytest.raises(HypothesisError):
        hausdorff_metric(d)


@given(chain_metrics(max_n=3))
def test_hausdorff_metric_is_a_semi_metric_below_d_on_singletons(d):
    hs = Hyperspace(d.ground)
    dh = hausdorff_metric(d, hs)
    assert dh.is_semi_metric()
    for x in d.ground:
        for y in d.ground:
            v = dh(hs.singleton(x), hs.singleton(y))
            assert leq_ext(v, d(x, y), d.index)
            # on a chain the sublevels are exact, so the singleton value is d itself
            assert v == d(x, y)


def test_singleton_inequality_on_diamond():
    g = GroundSet(3)
    d = GenMetric(g, diamond(), ((0, 1, 3), (1, 0, 2), (3, 2, 0)))
    hs = Hyperspace(g)
    dh = hausdorff_metric(d, hs)
    for x in g:
        for y in g:
            assert leq_ext(dh(hs.singleton(x), hs.singleton(y)), d(x, y), d.index)


def test_hausdorff_cert_on_chain_index():
    cert = hausdorff_cert(absolute_difference(3))
    dh = cert.metric
    for a in range(dh.index.m):
        assert dh.entourage(a).compose(dh.entourage(a)) <= dh.entourage(cert.phi(a))
    with pytest.raises(HypothesisError):
        hausdorff_cert(GenMetric(GroundSet(2), diamond(), ((0, 3), (3, 0))))


def test_agreement_on_all_chain_base_structures_on_three_points():
    g = GroundSet(3)
    for r in all_symmetric_reflexive(g):
        s = generate(g, [r])
        chain = sorted({diagonal(g), r.symmetrize_cap() & s.top, s.top}, key=len)
        if all(a <= b for a, b in zip(chain, chain[1:])):
            d = metric_from_base(chain, s)
            assert verify_hausdorff_agreement(d, s).equal
    assert verify_hausdorff_agreement(saturated_metric(CoarseStructure.minimal(g))).equal


def test_agreement_needs_a_chain():
    d = GenMetric(GroundSet(2), diamond(), ((0, 3), (3, 0)))
    with pytest.raises(HypothesisError):
        verify_hausdorff_agreement(d)
    assert compare_hausdorff(d).induced == structure_from_metric(hausdorff_metric(d))


# the open-question search


def well_formed(rep):
    assert isinstance(rep, SearchReport)
    assert 0 <= rep.steps <= rep.budget
    assert rep.examined + rep.skipped_not_coarse <= rep.steps
    assert rep.lines()[-1].startswith("outcome:")


def test_search_reports_without_asserting_an_answer():
    rep = search_counterexample(2, [diamond()], step_budget=2000)
    well_formed(rep)
    assert rep.pool_used == ["diamond"]
    # the outcome is recorded, never fixed in advance
    if rep.witness is not None:
        assert rep.witness.question in (1, 2)


def test_search_edge_cases():
    empty = search_counterexample(3, [])
    well_formed(empty)
    assert empty.witness is None and empty.steps == 0
    chains = search_counterexample(3, [Poset.chain(3)])
    assert chains.witness is None and chains.pool_rejected == [Poset.chain(3).name]
    tight = search_counterexample(3, [diamond()], step_budget=5)
    well_formed(tight)
    assert tight.steps <= 5
