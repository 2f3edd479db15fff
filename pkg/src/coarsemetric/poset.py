"""Finite partially ordered index sets, the adjoined infinity, and meets.

A :class:`Poset` on ``m`` elements stores, for every element, the bitmask of
elements above it and the bitmask of elements below it. Elements may carry an
arbitrary hashable payload (a relation, a valuation, a name); the order only
ever looks at indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Hashable, Iterable, Sequence

from .errors import HypothesisError
from .relset import Relation, bits


class _Infinity:
    """The element adjoined above every index; a singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

# An extended index value: an ``int`` index into a poset, or ``INF``.
ExtElem = Any


@dataclass(frozen=True, eq=False)
class Poset:
    up: tuple[int, ...]
    elements: tuple[Hashable, ...] = ()
    name: str = "I"
    down: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        m = len(self.up)
        if m == 0:
            raise ValueError("a poset needs at least one element")
        if not self.elements:
            object.__setattr__(self, "elements", tuple(range(m)))
        elif len(self.elements) != m:
            raise ValueError("payload count does not match the number of elements")
        elif len(set(self.elements)) != m:
            raise ValueError("element payloads must be distinct")
        full = (1 << m) - 1
        down = [0] * m
        for i, u in enumerate(self.up):
            if u & ~full:
                raise ValueError("order refers to an element outside the poset")
            if not u >> i & 1:
                raise ValueError(f"order is not reflexive at {i}")
            for j in bits(u):
                down[j] |= 1 << i
        for i, u in enumerate(self.up):
            if u & down[i] != 1 << i:
                raise ValueError(f"order is not antisymmetric at {i}")
            for j in bits(u):
                if self.up[j] & ~u:
                    raise ValueError(f"order is not transitive through {i} <= {j}")
        object.__setattr__(self, "down", tuple(down))

    # construction

    @classmethod
    def from_matrix(cls, leq: Sequence[Sequence[bool]], elements=(), name="I") -> Poset:
        up = tuple(sum(1 << j for j, v in enumerate(row) if v) for row in leq)
        return cls(up, tuple(elements), name)

    @classmethod
    def from_pairs(cls, m: int, pairs: Iterable[tuple[int, int]], elements=(), name="I") -> Poset:
        """Reflexive-transitive closure of the given ``i <= j`` pairs."""
        up = [1 << i for i in range(m)]
        for i, j in pairs:
            if not (0 <= i < m and 0 <= j < m):
                raise ValueError(f"pair ({i}, {j}) outside 0..{m - 1}")
            up[i] |= 1 << j
        changed = True
        while changed:
            changed = False
            for i in range(m):
                acc = up[i]
                for j in bits(up[i]):
                    acc |= up[j]
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        return cls(tuple(up), tuple(elements), name)

    @classmethod
    def chain(cls, m: int, elements=(), name="I") -> Poset:
        return cls(tuple(((1 << m) - 1) & ~((1 << i) - 1) for i in range(m)), tuple(elements), name)

    # basics

    def __len__(self) -> int:
        return len(self.up)

    @property
    def m(self) -> int:
        return len(self.up)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.up == other.up and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.up, self.elements))

    def check_index(self, a: int) -> None:
        if not isinstance(a, int) or not 0 <= a < self.m:
            raise ValueError(f"{a!r} is not an element index of poset {self.name}")

    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def leq_ext(self, a: ExtElem, b: ExtElem) -> bool:
        """Order of the extension by a top element ``INF``."""
        if b is INF:
            if a is not INF:
                self.check_index(a)
            return True
        self.check_index(b)
        if a is INF:
            return False
        self.check_index(a)
        return self.leq(a, b)

    def index_of(self, payload: Hashable) -> int:
        return self._positions[payload]

    @cached_property
    def _positions(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def zero(self) -> int | None:
        full = (1 << self.m) - 1
        for i, u in enumerate(self.up):
            if u == full:
                return i
        return None

    @cached_property
    def top(self) -> int | None:
        full = (1 << self.m) - 1
        for i, d in enumerate(self.down):
            if d == full:
                return i
        return None

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        """A deterministic topological order (smaller elements first)."""
        order, placed = [], 0
        while len(order) < self.m:
            for i in range(self.m):
                if not placed >> i & 1 and self.down[i] & ~placed == 1 << i:
                    order.append(i)
                    placed |= 1 << i
                    break
        return tuple(order)

    def label(self, a: ExtElem) -> str:
        if a is INF:
            return "inf"
        e = self.elements[a]
        return e if isinstance(e, str) else str(a)

    # bounds

    def lower_bounds(self, subset: Iterable[int]) -> int:
        acc = (1 << self.m) - 1
        for s in subset:
            acc &= self.down[s]
        return acc

    def upper_bounds(self, subset: Iterable[int]) -> int:
        acc = (1 << self.m) - 1
        for s in subset:
            acc &= self.up[s]
        return acc

    def greatest_in(self, mask: int) -> int | None:
        for g in bits(mask):
            if mask & ~self.down[g] == 0:
                return g
        return None

    def least_in(self, mask: int) -> int | None:
        for g in bits(mask):
            if mask & ~self.up[g] == 0:
                return g
        return None

    def meet(self, subset: Iterable[int]) -> int | None:
        """Greatest lower bound of a nonempty subset, or ``None``."""
        subset = list(subset)
        if not subset:
            raise ValueError("meet of an empty subset")
        for s in subset:
            self.check_index(s)
        return self.greatest_in(self.lower_bounds(subset))

    def join(self, subset: Iterable[int]) -> int | None:
        subset = list(subset)
        if not subset:
            raise ValueError("join of an empty subset")
        for s in subset:
            self.check_index(s)
        return self.least_in(self.upper_bounds(subset))

    # predicates

    def is_upward_directed(self) -> bool:
        return all(
            self.up[a] & self.up[b]
            for a in range(self.m) for b in range(a + 1, self.m)
        )

    def is_d_index(self) -> bool:
        """Zero present, nonzero part nonempty and downward directed."""
        z = self.zero
        if z is None:
            raise HypothesisError(f"poset {self.name} has no zero")
        rest = ((1 << self.m) - 1) & ~(1 << z)
        if not rest:
            return False
        nonzero = list(bits(rest))
        return all(
            self.down[a] & self.down[b] & rest
            for i, a in enumerate(nonzero) for b in nonzero[i + 1:]
        )

    def is_totally_ordered(self) -> bool:
        return all(
            self.leq(a, b) or self.leq(b, a)
            for a in range(self.m) for b in range(a + 1, self.m)
        )

    def is_meet_complete(self) -> bool:
        """Every nonempty subset has a meet.

        In a finite poset pairwise meets suffice: the meet of a larger subset
        is obtained by folding pairwise meets. :meth:`is_meet_complete_exhaustive`
        is the direct check.
        """
        for a in range(self.m):
            for b in range(a + 1, self.m):
                if self.greatest_in(self.down[a] & self.down[b]) is None:
                    return False
        return True

    def is_meet_complete_exhaustive(self) -> bool:
        if self.m > 16:
            raise HypothesisError("exhaustive meet check limited to 16 elements")
        for k in range(1, self.m + 1):
            for subset in combinations(range(self.m), k):
                if self.meet(subset) is None:
                    return False
        return True

    def is_join_complete(self) -> bool:
        for a in range(self.m):
            for b in range(a + 1, self.m):
                if self.least_in(self.up[a] & self.up[b]) is None:
                    return False
        return True

    def with_top(self, name: str | None = None) -> Poset:
        """The extension by a new largest element, as an ordinary poset."""
        m = self.m
        up = tuple(u | 1 << m for u in self.up) + (1 << m,)
        return Poset(up, self.elements + (INF,), name or f"{self.name}_inf")

    def is_complete_lattice(self, extended: bool = False) -> bool:
        target = self.with_top() if extended else self
        return target.is_meet_complete() and target.is_join_complete()

    is_complete_lattice_ext = is_complete_lattice


def leq_ext(a: ExtElem, b: ExtElem, poset: Poset) -> bool:
    return poset.leq_ext(a, b)


def inclusion_poset(family: Iterable[Relation], name: str = "I") -> Poset:
    """Distinct relations of ``family`` ordered by inclusion.

    Elements are listed in canonical relation order (fewest pairs first), so
    the index order is already a linear extension. ``poset.elements`` holds
    the relations; ``poset.index_of(r)`` maps back.
    """
    members = sorted(set(family), key=Relation.sort_key)
    if not members:
        raise ValueError("inclusion poset of an empty family")
    up = []
    for i, a in enumerate(members):
        u = 0
        for j, b in enumerate(members):
            if a <= b:
                u |= 1 << j
        up.append(u)
    return Poset(tuple(up), tuple(members), name)


@dataclass(frozen=True)
class MonotoneMap:
    """A map between index posets, stored as a table of target indices.

    ``table[a]`` may be ``None`` for elements outside the map's domain (the
    descent witness of a uniform metric is undefined at the zero).
    """

    source: Poset
    target: Poset
    table: tuple[int | None, ...]
    require_increasing: bool = False

    def __post_init__(self):
        if len(self.table) != self.source.m:
            raise ValueError("map table length does not match the source poset")
        for v in self.table:
            if v is not None:
                self.target.check_index(v)
        if self.require_increasing and not self.is_increasing():
            raise ValueError("map is declared increasing but is not")

    def __call__(self, a: int) -> int | None:
        return self.table[a]

    def extended(self, a: ExtElem) -> ExtElem:
        return INF if a is INF else self.table[a]

    def is_increasing(self) -> bool:
        s, t = self.source, self.target
        for a in range(s.m):
            if self.table[a] is None:
                continue
            for b in bits(s.up[a]):
                if self.table[b] is not None and not t.leq(self.table[a], self.table[b]):
                    return False
        return True

    @classmethod
    def identity(cls, poset: Poset) -> MonotoneMap:
        return cls(poset, poset, tuple(range(poset.m)))
