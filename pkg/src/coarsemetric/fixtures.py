"""Small named spaces, metrics and index posets used by the tests and the CLI."""

from __future__ import annotations

from .coarse import CoarseStructure, generate
from .metric import GenMetric
from .poset import INF, Poset
from .relset import GroundSet, Relation, diagonal


def pair_relation(ground: GroundSet, *pairs: tuple[int, int]) -> Relation:
    """Diagonal plus the given pairs in both directions."""
    sym = [(x, y) for x, y in pairs] + [(y, x) for x, y in pairs]
    return diagonal(ground) | Relation.from_pairs(ground, sym)


def e1_structure(n: int = 4) -> tuple[CoarseStructure, Relation]:
    """The structure generated by ``E1 = Δ ∪ {(0,1),(1,0)}``, which has ``I^E = {Δ, E1}``."""
    g = GroundSet(n)
    e1 = pair_relation(g, (0, 1))
    return generate(g, [e1]), e1


def pairing_structure() -> tuple[CoarseStructure, Relation]:
    """On four points, ``E = Δ ∪ {(0,1),(1,0),(2,3),(3,2)}`` and the structure it generates."""
    g = GroundSet(4)
    e = pair_relation(g, (0, 1), (2, 3))
    return generate(g, [e]), e


def truncated_line() -> tuple[GenMetric, GenMetric]:
    """Finite stand-in for a line with a capped distance, indexed two ways.

    Six points split into halves ``{0,1,2}`` and ``{3,4,5}``; inside a half
    the distance is ``|x - y|`` in the chain ``0 < 1 < 2``, across halves it
    is ``inf``. The second metric has the same table over ``0 < 1 < 2 < top``
    with ``top`` in place of ``inf``. ``top`` is an ordinary index element
    there, so that metric never takes the adjoined infinity.
    """
    g = GroundSet(6)
    chain = Poset.chain(3, ("0", "1", "2"), name="I")
    with_top = Poset.chain(4, ("0", "1", "2", "top"), name="J")

    def table(far):
        return lambda x, y: abs(x - y) if (x < 3) == (y < 3) else far

    return (GenMetric.from_function(g, chain, table(INF), name="dI"),
            GenMetric.from_function(g, with_top, table(3), name="dJ"))


def absolute_difference(n: int = 6) -> GenMetric:
    """``|x - y|`` on ``0..n-1`` into the chain ``0 < 1 < ... < n-1``."""
    g = GroundSet(n)
    chain = Poset.chain(n, tuple(str(i) for i in range(n)), name="N")
    return GenMetric.from_function(g, chain, lambda x, y: abs(x - y), name="abs")


def diamond() -> Poset:
    """``0 < a, b < 1``."""
    return Poset.from_pairs(4, [(0, 1), (0, 2), (1, 3), (2, 3)], ("0", "a", "b", "1"), name="diamond")


def m3() -> Poset:
    """``0 < a, b, c < 1``."""
    return Poset.from_pairs(
        5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], ("0", "a", "b", "c", "1"), name="M3"
    )


def n5() -> Poset:
    """The pentagon ``0 < a < b < 1`` with ``0 < c < 1``."""
    return Poset.from_pairs(
        5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], ("0", "a", "b", "c", "1"), name="N5"
    )


def bowtie() -> Poset:
    """``0 < a, b < c, d``: not meet-complete and not upward directed."""
    return Poset.from_pairs(
        5, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4)], ("0", "a", "b", "c", "d"), name="bowtie"
    )


POOLS = {"diamond": diamond, "m3": m3, "n5": n5}
