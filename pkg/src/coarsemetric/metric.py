"""Poset-valued generalized metrics ``d: X × X → I ∪ {INF}``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from .errors import GroundMismatchError, HypothesisError
from .poset import INF, ExtElem, Poset
from .relset import GroundSet, Relation, bits, mask_to_set


@dataclass(frozen=True, eq=False)
class GenMetric:
    """A dense value table over a ground set and an index poset with zero.

    By default the table must satisfy ``d(x, x) = 0`` and symmetry. Pass
    ``raw=True`` for arbitrary maps into the extended index.
    """

    ground: GroundSet
    index: Poset
    values: tuple[tuple[ExtElem, ...], ...]
    raw: bool = False
    name: str = "d"

    def __post_init__(self):
        n = self.ground.n
        if self.index.zero is None:
            raise HypothesisError(f"index poset {self.index.name} has no zero")
        values = tuple(tuple(row) for row in self.values)
        if len(values) != n or any(len(row) != n for row in values):
            raise ValueError(f"metric table must be {n}x{n}")
        for row in values:
            for v in row:
                if v is not INF:
                    self.index.check_index(v)
        object.__setattr__(self, "values", values)
        if not self.raw and not self.is_semi_metric():
            raise HypothesisError(
                "table is not a semi-metric (zero diagonal and symmetry); pass raw=True to allow it"
            )

    @classmethod
    def from_function(cls, ground: GroundSet, index: Poset,
                      fn: Callable[[int, int], ExtElem], **kw) -> GenMetric:
        return cls(ground, index, tuple(tuple(fn(x, y) for y in ground) for x in ground), **kw)

    def __call__(self, x: int, y: int) -> ExtElem:
        return self.values[x][y]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenMetric):
            return NotImplemented
        return (self.ground == other.ground and self.index == other.index
                and self.values == other.values)

    def __hash__(self) -> int:
        return hash((self.ground, self.index, self.values))

    @property
    def zero(self) -> int:
        return self.index.zero

    def is_semi_metric(self) -> bool:
        z = self.index.zero
        n = self.ground.n
        for x in range(n):
            if self.values[x][x] != z or self.values[x][x] is INF:
                return False
            for y in range(x + 1, n):
                if self.values[x][y] != self.values[y][x]:
                    return False
        return True

    def takes_infinity(self) -> bool:
        return any(v is INF for row in self.values for v in row)

    @cached_property
    def sublevels(self) -> tuple[Relation, ...]:
        """``D_α`` for every index ``α``, in index order."""
        n, idx = self.ground.n, self.index
        rows = [[0] * n for _ in range(idx.m)]
        for x in range(n):
            for y in range(n):
                v = self.values[x][y]
                if v is INF:
                    continue
                for a in bits(idx.up[v]):
                    rows[a][x] |= 1 << y
        return tuple(Relation(self.ground, tuple(r)) for r in rows)

    def entourage(self, alpha: int) -> Relation:
        """``D_α = {(x, y) : d(x, y) <= α}``."""
        self.index.check_index(alpha)
        return self.sublevels[alpha]

    def ball(self, z: int, alpha: int) -> frozenset[int]:
        self.ground.check_element(z)
        return mask_to_set(self.entourage(alpha).rows[z])

    def ball_mask(self, z: int, alpha: int) -> int:
        return self.sublevels[alpha].rows[z]

    def base_family(self) -> list[tuple[int, Relation]]:
        """``(α, D_α)`` for every nonzero ``α``; duplicates are kept."""
        z = self.index.zero
        if self.index.m == 1:
            raise HypothesisError("index has no element besides its zero")
        return [(a, self.sublevels[a]) for a in range(self.index.m) if a != z]

    def reindexed(self, index: Poset, mapping: Callable[[int], ExtElem], **kw) -> GenMetric:
        """Push the table through ``mapping`` (``INF`` is kept) into ``index``."""
        return GenMetric(
            self.ground, index,
            tuple(tuple(INF if v is INF else mapping(v) for v in row) for row in self.values),
            **kw,
        )

    def table_lines(self) -> list[str]:
        """Human-readable square table of index labels."""
        labels = [[self.index.label(v) for v in row] for row in self.values]
        width = max(len(s) for row in labels for s in row)
        head = max(len(self.ground.label(i)) for i in self.ground)
        lines = [" " * head + " | " + " ".join(self.ground.label(j).rjust(width) for j in self.ground)]
        for i, row in enumerate(labels):
            lines.append(self.ground.label(i).rjust(head) + " | " + " ".join(s.rjust(width) for s in row))
        return lines


def entourage(d: GenMetric, alpha: int) -> Relation:
    return d.entourage(alpha)


def ball(d: GenMetric, z: int, alpha: int) -> frozenset[int]:
    return d.ball(z, alpha)


def base_family(d: GenMetric) -> list[tuple[int, Relation]]:
    return d.base_family()


def is_semi_metric(d: GenMetric) -> bool:
    return d.is_semi_metric()


def same_ground(d1: GenMetric, d2: GenMetric) -> None:
    if d1.ground != d2.ground:
        raise GroundMismatchError("metrics live on different ground sets")
