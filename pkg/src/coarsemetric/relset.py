"""Binary relations on a finite ground set, stored as row bitmasks.

Elements of a ground set of size ``n`` are the integers ``0..n-1``; labels are
only used for input and output. A relation keeps one integer per row: bit
``j`` of ``rows[i]`` is set exactly when ``(i, j)`` belongs to the relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from . import config
from .errors import CapacityError, GroundMismatchError


@dataclass(frozen=True)
class GroundSet:
    n: int
    labels: tuple[str, ...] | None = None
    name: str = "X"

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"a ground set needs n >= 1, got {self.n!r}")
        if self.n > config.max_ground():
            raise CapacityError(
                f"ground set of size {self.n} exceeds the limit {config.max_ground()}"
            )
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.n:
                raise ValueError(f"expected {self.n} labels, got {len(labels)}")
            if len(set(labels)) != self.n:
                raise ValueError("labels must be pairwise distinct")
            object.__setattr__(self, "labels", labels)

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.n))

    def __len__(self) -> int:
        return self.n

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def index(self, label: str) -> int:
        if self.labels is not None and label in self.labels:
            return self.labels.index(label)
        i = int(label)
        self.check_element(i)
        return i

    def check_element(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise ValueError(f"element {i} is outside the ground set 0..{self.n - 1}")

    def mask(self, elements: Iterable[int]) -> int:
        m = 0
        for i in elements:
            self.check_element(i)
            m |= 1 << i
        return m


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


@dataclass(frozen=True, slots=True)
class Relation:
    ground: GroundSet
    rows: tuple[int, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.rows) != self.ground.n:
            raise ValueError("row count does not match the ground set")
        full = self.ground.full_mask
        for r in self.rows:
            if r < 0 or r & ~full:
                raise ValueError("relation row refers to an element outside the ground set")
        object.__setattr__(self, "_hash", hash((self.ground.n, self.rows)))

    def __hash__(self) -> int:
        return self._hash

    # construction

    @classmethod
    def from_pairs(cls, ground: GroundSet, pairs: Iterable[tuple[int, int]]) -> Relation:
        rows = [0] * ground.n
        for i, j in pairs:
            ground.check_element(i)
            ground.check_element(j)
            rows[i] |= 1 << j
        return cls(ground, tuple(rows))

    @classmethod
    def empty(cls, ground: GroundSet) -> Relation:
        return cls(ground, (0,) * ground.n)

    @classmethod
    def full(cls, ground: GroundSet) -> Relation:
        return cls(ground, (ground.full_mask,) * ground.n)

    @classmethod
    def from_key(cls, ground: GroundSet, key: int) -> Relation:
        n = ground.n
        row_mask = ground.full_mask
        return cls(ground, tuple((key >> (i * n)) & row_mask for i in range(n)))

    # inspection

    @property
    def key(self) -> int:
        """All n*n membership bits packed into one integer (row-major)."""
        n = self.ground.n
        k = 0
        for i, r in enumerate(self.rows):
            k |= r << (i * n)
        return k

    def __contains__(self, pair) -> bool:
        i, j = pair
        return 0 <= i < self.ground.n and bool(self.rows[i] >> j & 1)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        for i, r in enumerate(self.rows):
            for j in bits(r):
                yield (i, j)

    def __len__(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def __bool__(self) -> bool:
        return any(self.rows)

    def pairs(self) -> list[tuple[int, int]]:
        return list(self)

    def __repr__(self) -> str:
        return f"Relation(n={self.ground.n}, {sorted(self)})"

    def is_symmetric(self) -> bool:
        return self == self.inverse()

    def is_reflexive(self) -> bool:
        return all(r >> i & 1 for i, r in enumerate(self.rows))

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.compose(self) <= self

    # algebra

    def _check(self, other: Relation) -> None:
        if self.ground is not other.ground and self.ground != other.ground:
            raise GroundMismatchError(
                f"relations over different ground sets ({self.ground.name}, {other.ground.name})"
            )

    def inverse(self) -> Relation:
        n = self.ground.n
        cols = [0] * n
        for i, r in enumerate(self.rows):
            bit = 1 << i
            for j in bits(r):
                cols[j] |= bit
        return Relation(self.ground, tuple(cols))

    def compose(self, other: Relation) -> Relation:
        """``self ∘ other``: (i, k) whenever (i, j) in self and (j, k) in other."""
        self._check(other)
        orows = other.rows
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc |= orows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return Relation(self.ground, tuple(out))

    def image_mask(self, mask: int) -> int:
        acc = 0
        rows = self.rows
        while mask:
            low = mask & -mask
            acc |= rows[low.bit_length() - 1]
            mask ^= low
        return acc

    def image(self, elements: Iterable[int]) -> frozenset[int]:
        """``B[S]``: every y with (x, y) in the relation for some x in S."""
        return mask_to_set(self.image_mask(self.ground.mask(elements)))

    def __or__(self, other: Relation) -> Relation:
        self._check(other)
        return Relation(self.ground, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __and__(self, other: Relation) -> Relation:
        self._check(other)
        return Relation(self.ground, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other: Relation) -> Relation:
        self._check(other)
        return Relation(self.ground, tuple(a & ~b for a, b in zip(self.rows, other.rows)))

    def __le__(self, other: Relation) -> bool:
        self._check(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __lt__(self, other: Relation) -> bool:
        return self <= other and self != other

    def __ge__(self, other: Relation) -> bool:
        return other <= self

    def __gt__(self, other: Relation) -> bool:
        return other < self

    union = __or__
    intersection = __and__
    difference = __sub__

    def is_subset(self, other: Relation) -> bool:
        return self <= other

    def symmetrize_cap(self) -> Relation:
        """``(A ∩ A⁻¹) ∪ Δ``."""
        return (self & self.inverse()) | diagonal(self.ground)

    def symmetrize_cup(self) -> Relation:
        """``A ∪ A⁻¹ ∪ Δ``."""
        return self | self.inverse() | diagonal(self.ground)

    def sort_key(self) -> tuple[int, int]:
        return (len(self), self.key)


def diagonal(ground: GroundSet) -> Relation:
    return Relation(ground, tuple(1 << i for i in range(ground.n)))


def inverse(a: Relation) -> Relation:
    return a.inverse()


def compose(a: Relation, b: Relation) -> Relation:
    return a.compose(b)


def image(b: Relation, elements: Iterable[int]) -> frozenset[int]:
    return b.image(elements)


def symmetrize_cap(a: Relation) -> Relation:
    return a.symmetrize_cap()


def symmetrize_cup(a: Relation) -> Relation:
    return a.symmetrize_cup()


def intersect_all(family: Iterable[Relation]) -> Relation:
    family = iter(family)
    try:
        acc = next(family)
    except StopIteration:
        raise ValueError("intersection of an empty family") from None
    for r in family:
        acc = acc & r
    return acc


def union_all(family: Iterable[Relation], ground: GroundSet) -> Relation:
    acc = Relation.empty(ground)
    for r in family:
        acc = acc | r
    return acc


def canonical(family: Iterable[Relation]) -> list[Relation]:
    """Distinct members in canonical order (size first, then packed bits)."""
    return sorted(set(family), key=Relation.sort_key)


def all_relations(ground: GroundSet) -> Iterator[Relation]:
    total = ground.n * ground.n
    if total > 20:
        raise CapacityError(f"enumerating all 2^{total} relations is not supported")
    for key in range(1 << total):
        yield Relation.from_key(ground, key)


def symmetric_reflexive_subsets(top: Relation, limit: int = 1 << 16) -> Iterator[Relation]:
    """Every symmetric reflexive relation contained in ``top``.

    ``top`` itself need not be symmetric; only unordered pairs present in both
    directions can occur. Order: by number of off-diagonal pairs, then
    lexicographically by pair choice.
    """
    ground = top.ground
    free = [(i, j) for i in range(ground.n) for j in range(i + 1, ground.n)
            if (i, j) in top and (j, i) in top]
    if not top.is_reflexive():
        return
    if (1 << len(free)) > limit:
        raise CapacityError(
            f"{1 << len(free)} symmetric reflexive subsets exceed the enumeration limit {limit}"
        )
    base = diagonal(ground).rows
    for k in range(len(free) + 1):
        for chosen in combinations(free, k):
            rows = list(base)
            for i, j in chosen:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            yield Relation(ground, tuple(rows))


def all_symmetric_reflexive(ground: GroundSet) -> list[Relation]:
    return list(symmetric_reflexive_subsets(Relation.full(ground)))
