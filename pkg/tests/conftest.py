import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from coarsemetric.metric import GenMetric  # noqa: E402
from coarsemetric.poset import INF, Poset  # noqa: E402
from coarsemetric.relset import GroundSet, Relation  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def relations(draw, n=None, max_n=4):
    if n is None:
        n = draw(st.integers(1, max_n))
    g = GroundSet(n)
    rows = tuple(draw(st.integers(0, (1 << n) - 1)) for _ in range(n))
    return Relation(g, rows)


@st.composite
def relation_triples(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return tuple(draw(relations(n=n)) for _ in range(3))


@pytest.fixture
def g3():
    return GroundSet(3)


@pytest.fixture
def g4():
    return GroundSet(4)


@st.composite
def structures(draw, n=None, max_n=4):
    """A coarse structure generated by up to three random relations."""
    from coarsemetric.coarse import generate

    if n is None:
        n = draw(st.integers(1, max_n))
    return generate(GroundSet(n), [draw(relations(n=n)) for _ in range(draw(st.integers(0, 3)))])


@st.composite
def inducing_metrics(draw, structure):
    """Either the saturated metric of ``structure`` or ``d^B`` for a random base of it."""
    from coarsemetric.coarse import metric_from_base, saturated_metric

    if draw(st.booleans()) and structure.ground.n <= 3:
        return saturated_metric(structure)
    extra = [draw(relations(n=structure.ground.n)) & structure.top for _ in range(draw(st.integers(0, 3)))]
    return metric_from_base([structure.top, *extra], structure)


@st.composite
def space_maps(draw, source, target):
    from coarsemetric.props import SpaceMap

    table = tuple(draw(st.integers(0, target.n - 1)) for _ in range(source.n))
    return SpaceMap(source, target, table)


@st.composite
def chain_metrics(draw, max_n=4, max_m=4):
    """Semi-metrics with random values (``inf`` included) in a chain index."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    vals = st.one_of(st.integers(0, m - 1), st.just(INF))
    table = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(x + 1, n):
            table[x][y] = table[y][x] = draw(vals)
    return GenMetric(GroundSet(n), Poset.chain(m), tuple(map(tuple, table)))
