"""Coarse structures on finite sets and the metric/structure correspondence.

A coarse structure on a finite set is closed under finite unions, so it has a
largest member; closure under inverses and products forces that member to be
an equivalence relation, and closure under subsets makes the structure exactly
the nonempty subsets of it. :class:`CoarseStructure` therefore stores that
largest member and enumerates the symmetric reflexive members (``I^E``) on
demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapacityError, GroundMismatchError, HypothesisError, NotABaseError
from .metric import GenMetric
from .poset import INF, MonotoneMap, Poset, inclusion_poset
from .relset import (
    GroundSet,
    Relation,
    bits,
    canonical,
    diagonal,
    symmetric_reflexive_subsets,
)

MEMBER_LIMIT = 1 << 16


@dataclass(frozen=True)
class Violation:
    """First failed axiom of an explicitly listed family."""

    kind: str
    members: tuple[Relation, ...]
    message: str


class StructureError(HypothesisError):
    def __init__(self, violation: Violation):
        super().__init__(violation.message)
        self.violation = violation


@dataclass(frozen=True, eq=False)
class CoarseStructure:
    ground: GroundSet
    top: Relation

    def __post_init__(self):
        if self.top.ground != self.ground:
            raise GroundMismatchError("largest member lives on another ground set")
        if not self.top.is_equivalence():
            raise HypothesisError("the largest member of a coarse structure must be an equivalence relation")

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoarseStructure):
            return NotImplemented
        return self.ground == other.ground and self.top == other.top

    def __hash__(self) -> int:
        return hash(self.top)

    def __repr__(self) -> str:
        return f"CoarseStructure(n={self.ground.n}, top={sorted(self.top)})"

    @classmethod
    def minimal(cls, ground: GroundSet) -> CoarseStructure:
        return cls(ground, diagonal(ground))

    @classmethod
    def maximal(cls, ground: GroundSet) -> CoarseStructure:
        return cls(ground, Relation.full(ground))

    @classmethod
    def from_members(cls, ground: GroundSet, members: Iterable[Relation]) -> CoarseStructure:
        """Structure whose ``I^E`` is exactly ``members``; validated."""
        members = list(members)
        violation = check_family(ground, members)
        if violation is not None:
            raise StructureError(violation)
        top = diagonal(ground)
        for m in members:
            top = top | m
        return cls(ground, top)

    @cached_property
    def members_sym(self) -> tuple[Relation, ...]:
        """``I^E``: every symmetric reflexive member, in canonical order."""
        return tuple(canonical(symmetric_reflexive_subsets(self.top, MEMBER_LIMIT)))

    @property
    def maximal_members(self) -> tuple[Relation, ...]:
        return (self.top,)

    def contains(self, e: Relation) -> bool:
        """Whether ``e`` is a controlled set (a nonempty subset of a member)."""
        return bool(e) and e <= self.top

    __contains__ = contains

    def issubset(self, other: CoarseStructure) -> bool:
        return self.top <= other.top

    def __le__(self, other: CoarseStructure) -> bool:
        return self.issubset(other)

    def classes(self) -> list[frozenset[int]]:
        seen, out = 0, []
        for x in self.ground:
            if not seen >> x & 1:
                row = self.top.rows[x]
                out.append(frozenset(bits(row)))
                seen |= row
        return out


def check_family(ground: GroundSet, members: Sequence[Relation]) -> Violation | None:
    """Check an explicit listing of ``I^E`` against the coarse axioms.

    Checks run in a fixed order: membership of the diagonal, symmetry and
    reflexivity of each member, closure under pairwise unions, products and
    finally symmetric reflexive subsets.
    """
    delta = diagonal(ground)
    for m in members:
        if m.ground != ground:
            return Violation("ground", (m,), "member over a different ground set")
    present = set(members)
    if delta not in present:
        return Violation("diagonal", (), "the diagonal is not a member")
    for m in members:
        if not (m.is_symmetric() and m.is_reflexive()):
            return Violation("symmetric-reflexive", (m,), "member is not symmetric and reflexive")
    ordered = canonical(present)
    for a, b in combinations(ordered, 2):
        if (a | b) not in present:
            return Violation("union", (a, b), "union of two members is not a member")
    for a in ordered:
        for b in ordered:
            prod = a.compose(b).symmetrize_cup()
            if not any(prod <= c for c in ordered):
                return Violation("product", (a, b), "product of two members has no member above it")
    for a in ordered:
        for s in symmetric_reflexive_subsets(a, MEMBER_LIMIT):
            if s not in present:
                return Violation("subset", (a, s), "a symmetric reflexive subset of a member is missing")
    return None


def generate(ground: GroundSet, generators: Iterable[Relation]) -> CoarseStructure:
    """Least coarse structure containing every generator.

    The fixpoint starts from the diagonal and the symmetrized generators and
    alternates union and symmetrized-product steps until nothing new appears.
    Because everything is closed downward at the end only the largest member
    needs to be carried through the iteration.
    """
    top = diagonal(ground)
    for g in generators:
        if g.ground != ground:
            raise GroundMismatchError("generator over a different ground set")
        top = top | g.symmetrize_cup()
    while True:
        nxt = top | top.compose(top).symmetrize_cup()
        if nxt == top:
            return CoarseStructure(ground, top)
        top = nxt


# coarse metrics


@dataclass(frozen=True)
class CoarseMetricCert:
    """A metric with a growth witness ``phi``: ``D_α ∘ D_α ⊆ D_{phi(α)}``."""

    metric: GenMetric
    phi: MonotoneMap

    def __post_init__(self):
        d = self.metric
        if self.phi.source != d.index or self.phi.target != d.index:
            raise ValueError("growth witness must be a self-map of the metric's index")
        for a in range(d.index.m):
            b = self.phi(a)
            if b is None or not d.sublevels[a].compose(d.sublevels[a]) <= d.sublevels[b]:
                raise HypothesisError(f"growth witness fails at index {d.index.label(a)}")

    @property
    def increasing(self) -> bool:
        return self.phi.is_increasing()


def _growth_targets(d: GenMetric, a: int) -> int:
    sq = d.sublevels[a].compose(d.sublevels[a])
    mask = 0
    for b, s in enumerate(d.sublevels):
        if sq <= s:
            mask |= 1 << b
    return mask


def is_coarse_metric(d: GenMetric) -> CoarseMetricCert | None:
    """Find a growth witness for ``d`` or return ``None``.

    When the meet of all admissible targets is itself admissible (always so
    on a totally ordered index) it is taken, giving the pointwise least and
    hence increasing witness. Otherwise the first admissible target in index
    order is taken, with no monotonicity promise.
    """
    idx = d.index
    if not idx.is_upward_directed():
        raise HypothesisError(f"index {idx.name} is not upward directed")
    if not d.is_semi_metric():
        return None
    meet_complete = idx.is_meet_complete()
    table = []
    for a in range(idx.m):
        targets = _growth_targets(d, a)
        if not targets:
            return None
        least = idx.greatest_in(idx.lower_bounds(bits(targets))) if meet_complete else None
        if least is not None and targets >> least & 1:
            table.append(least)
        else:
            table.append(next(b for b in idx.linear_extension if targets >> b & 1))
    return CoarseMetricCert(d, MonotoneMap(idx, idx, tuple(table)))


def structure_from_metric(d: GenMetric | CoarseMetricCert) -> CoarseStructure:
    """``E_d``: the structure generated by all sublevels ``D_α``."""
    if isinstance(d, CoarseMetricCert):
        d = d.metric
    return generate(d.ground, d.sublevels)


def saturated_metric(structure: CoarseStructure) -> GenMetric:
    """``d^E`` over the inclusion poset of ``I^E``."""
    ground = structure.ground
    index = inclusion_poset(structure.members_sym, name="IE")
    delta = diagonal(ground)

    def value(x, y):
        if (x, y) not in structure.top:
            return INF
        return index.index_of(delta | Relation.from_pairs(ground, [(x, y), (y, x)]))

    return GenMetric.from_function(ground, index, value, name="dE")


def relation_index_phi(d: GenMetric) -> MonotoneMap:
    """Growth witness for a metric indexed by an intersection-closed family of relations.

    ``phi(B)`` is the intersection of all index relations containing ``B ∘ B``.
    For ``d^E`` this is ``E ∘ E`` itself; for ``d^B`` it is the witness built in
    the construction from a base.
    """
    idx = d.index
    table = []
    for b in idx.elements:
        sq = b.compose(b)
        above = [i for i, r in enumerate(idx.elements) if sq <= r]
        if not above:
            raise HypothesisError("no index relation contains the square of a member")
        inter = idx.elements[above[0]]
        for i in above[1:]:
            inter = inter & idx.elements[i]
        table.append(idx.index_of(inter))
    return MonotoneMap(idx, idx, tuple(table))


def saturated_cert(structure: CoarseStructure) -> CoarseMetricCert:
    d = saturated_metric(structure)
    return CoarseMetricCert(d, relation_index_phi(d))


def is_saturated(d: GenMetric) -> bool:
    idx, levels = d.index, d.sublevels
    for a in range(idx.m):
        for b in range(idx.m):
            if a != b and levels[a] <= levels[b] and not idx.leq(a, b):
                return False
    present = set(levels)
    maximal = [s for s in set(levels) if not any(s < t for t in present)]
    for s in canonical(maximal):
        for sub in symmetric_reflexive_subsets(s, MEMBER_LIMIT):
            if sub not in present:
                return False
    return True


def sublevel_isomorphism(d: GenMetric, structure: CoarseStructure) -> dict[int, Relation]:
    """The order isomorphism ``α ↦ D_α`` from a saturated metric's index onto ``I^E``.

    Raises :class:`HypothesisError` when the map is not an order isomorphism
    or does not carry ``d`` onto ``d^E``.
    """
    levels = d.sublevels
    iso = {a: levels[a] for a in range(d.index.m)}
    if len(set(iso.values())) != d.index.m:
        raise HypothesisError("sublevel map is not injective")
    if set(iso.values()) != set(structure.members_sym):
        raise HypothesisError("sublevels are not exactly the symmetric reflexive members")
    for a in range(d.index.m):
        for b in range(d.index.m):
            if d.index.leq(a, b) != (levels[a] <= levels[b]):
                raise HypothesisError("sublevel map does not reflect the order")
    de = saturated_metric(structure)
    for x in d.ground:
        for y in d.ground:
            v, w = d(x, y), de(x, y)
            mapped = INF if v is INF else de.index.index_of(levels[v])
            if mapped != w:
                raise HypothesisError(f"transported value differs from d^E at ({x}, {y})")
    return iso


# bases


def closure_bar(family: Iterable[Relation]) -> list[Relation]:
    """All intersections of nonempty subfamilies of the cap-symmetrized family."""
    sym = canonical(r.symmetrize_cap() for r in family)
    if not sym:
        raise ValueError("closure of an empty family")
    closed = set(sym)
    frontier = list(sym)
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(closed):
                c = a & b
                if c not in closed:
                    closed.add(c)
                    fresh.append(c)
        frontier = fresh
    return canonical(closed)


def base_top(family: Sequence[Relation], structure: CoarseStructure | None = None) -> Relation:
    """Largest member of a base; raises :class:`NotABaseError` otherwise.

    On a finite set a family is a base for some coarse structure exactly when
    one member contains every other and is an equivalence relation.
    """
    family = list(family)
    if not family:
        raise NotABaseError("empty family")
    ground = family[0].ground
    for r in family:
        if r.ground != ground:
            raise GroundMismatchError("base members over different ground sets")
    candidates = [r for r in family if all(s <= r for s in family)]
    if not candidates:
        big = max(canonical(family), key=len)
        stray = next(r for r in canonical(family) if not r <= big)
        raise NotABaseError("no member contains every other member", stray)
    top = candidates[0]
    if not top.is_equivalence():
        raise NotABaseError("largest member is not closed under inverse and product", top)
    if structure is not None and top != structure.top:
        bad = top if not top <= structure.top else structure.top
        raise NotABaseError("family is not a base of the given structure", bad)
    return top


def metric_from_base(family: Sequence[Relation], structure: CoarseStructure | None = None) -> GenMetric:
    """``d^B(x, y)``: intersection of the closure members containing ``(x, y)``."""
    base_top(family, structure)
    closure = closure_bar(family)
    index = inclusion_poset(closure, name="Bbar")
    ground = closure[0].ground

    def value(x, y):
        containing = [r for r in closure if (x, y) in r]
        if not containing:
            return INF
        inter = containing[0]
        for r in containing[1:]:
            inter = inter & r
        return index.index_of(inter)

    return GenMetric.from_function(ground, index, value, name="dB")


def base_cert(family: Sequence[Relation], structure: CoarseStructure | None = None) -> CoarseMetricCert:
    d = metric_from_base(family, structure)
    return CoarseMetricCert(d, relation_index_phi(d))


# domination


@dataclass(frozen=True)
class Domination:
    """Witness ``gamma: I' → I`` for ``d ⪯ d'``.

    ``kind`` records how it was found: ``"canonical"`` (meet of admissible
    targets), ``"top"`` (constant map to the top of ``I``), ``"searched"``
    (exhaustive monotone search) or ``"arbitrary"`` (no monotone witness
    established).
    """

    gamma: MonotoneMap
    kind: str

    @property
    def increasing(self) -> bool:
        return self.gamma.is_increasing()


def _admissible(d: GenMetric, d_prime: GenMetric) -> list[int]:
    out = []
    for s in d_prime.sublevels:
        mask = 0
        for a, t in enumerate(d.sublevels):
            if s <= t:
                mask |= 1 << a
        out.append(mask)
    return out


def _search_increasing(src: Poset, dst: Poset, allowed: list[int]) -> tuple[int, ...] | None:
    order = src.linear_extension
    table: list[int | None] = [None] * src.m

    def place(k):
        if k == len(order):
            return True
        a = order[k]
        for b in bits(allowed[a]):
            # predecessors in the linear extension are already placed
            if all(dst.leq(table[p], b) for p in bits(src.down[a]) if p != a):
                table[a] = b
                if place(k + 1):
                    return True
        table[a] = None
        return False

    return tuple(table) if place(0) else None


def dominates(d: GenMetric, d_prime: GenMetric, search_limit: int = 5) -> Domination | None:
    """Witness that ``d`` is coarsely dominated by ``d_prime`` (``d ⪯ d'``), or ``None``."""
    if d.ground != d_prime.ground:
        raise GroundMismatchError("metrics live on different ground sets")
    idx, src = d.index, d_prime.index
    allowed = _admissible(d, d_prime)
    if not all(allowed):
        return None
    if idx.is_meet_complete():
        table = tuple(idx.greatest_in(idx.lower_bounds(bits(m))) for m in allowed)
        if all(m >> t & 1 for m, t in zip(allowed, table)):
            return Domination(MonotoneMap(src, idx, table), "canonical")
    top = idx.top
    if top is not None and all(m >> top & 1 for m in allowed):
        return Domination(MonotoneMap(src, idx, (top,) * src.m), "top")
    if idx.m <= search_limit and src.m <= search_limit:
        found = _search_increasing(src, idx, allowed)
        if found is not None:
            return Domination(MonotoneMap(src, idx, found), "searched")
    table = tuple(next(bits(m)) for m in allowed)
    return Domination(MonotoneMap(src, idx, table), "arbitrary")


def equivalent(d: GenMetric, d_prime: GenMetric) -> bool:
    return dominates(d, d_prime) is not None and dominates(d_prime, d) is not None


# meet completion

MEET_COMPLETION_LIMIT = 5


def meet_completion(d: GenMetric) -> GenMetric:
    """``j ∘ d`` over subsets of principal down-sets that contain the zero.

    The index elements are frozensets of original indices ordered by
    inclusion; ``α`` is sent to its down-set. Keeping only subsets that
    contain ``0_I`` makes ``{0_I}`` the zero and keeps the family closed
    under intersection (two singletons would otherwise meet in the empty set).
    """
    idx = d.index
    if idx.m > MEET_COMPLETION_LIMIT:
        raise CapacityError(
            f"meet completion is exponential; index has {idx.m} > {MEET_COMPLETION_LIMIT} elements"
        )
    subsets = set()
    for a in range(idx.m):
        below = [b for b in bits(idx.down[a]) if b != idx.zero]
        for k in range(len(below) + 1):
            subsets.update(frozenset((idx.zero, *c)) for c in combinations(below, k))
    ordered = sorted(subsets, key=lambda s: (len(s), sorted(s)))
    up = tuple(
        sum(1 << j for j, t in enumerate(ordered) if s <= t) for s in ordered
    )
    tilde = Poset(up, tuple(ordered), name=f"{idx.name}~")
    j = {a: tilde.index_of(frozenset(bits(idx.down[a]))) for a in range(idx.m)}
    return d.reindexed(tilde, j.__getitem__, name=f"{d.name}~")


def meet_completion_phi(cert: CoarseMetricCert, tilde: GenMetric) -> MonotoneMap:
    """Growth witness on the completed index: intersect ``j(phi(α))`` over ``A ⊆ α̃``."""
    idx = cert.metric.index
    tidx = tilde.index
    table = []
    for a_set in tidx.elements:
        acc = None
        for a in range(idx.m):
            if a_set <= frozenset(bits(idx.down[a])):
                image = frozenset(bits(idx.down[cert.phi(a)]))
                acc = image if acc is None else acc & image
        table.append(tidx.index_of(acc))
    return MonotoneMap(tidx, tidx, tuple(table))
