"""Coarse-space properties decided from the structures alone.

These follow the textbook definitions directly (iterating over controlled
sets) and never look at a metric. They are the reference side against which
the metric criteria in :mod:`coarsemetric.props` are tested.
"""

from __future__ import annotations

from typing import Iterable

from .coarse import CoarseStructure
from .props import SpaceMap
from .relset import Relation, bits


def is_coarsely_connected(structure: CoarseStructure) -> bool:
    g = structure.ground
    return all(structure.contains(Relation.from_pairs(g, [(x, y)])) for x in g for y in g)


def is_bounded(structure: CoarseStructure, subset: Iterable[int]) -> bool:
    """Some controlled ``E`` and point ``x`` with ``subset ⊆ E[x]``."""
    mask = structure.ground.mask(subset)
    for e in structure.members_sym:
        for x in structure.ground:
            if mask & ~e.rows[x] == 0:
                return True
    return False


def is_bornologous(f: SpaceMap, sx: CoarseStructure, sy: CoarseStructure) -> bool:
    return all(sy.contains(f.image_relation(e)) for e in sx.members_sym)


def is_proper(f: SpaceMap, sx: CoarseStructure, sy: CoarseStructure) -> bool:
    """Preimages of bounded sets are bounded (the empty set counts as bounded)."""
    for mask in range(1, 1 << sy.ground.n):
        b = list(bits(mask))
        if is_bounded(sy, b):
            pre = f.preimage_mask(mask)
            if pre and not is_bounded(sx, bits(pre)):
                return False
    return True


def is_effectively_proper(f: SpaceMap, sx: CoarseStructure, sy: CoarseStructure) -> bool:
    return all(sx.contains(f.preimage_relation(e)) for e in sy.members_sym)


def are_close(f: SpaceMap, g: SpaceMap, sy: CoarseStructure) -> bool:
    return sy.contains(Relation.from_pairs(sy.ground, ((f(x), g(x)) for x in f.source)))
