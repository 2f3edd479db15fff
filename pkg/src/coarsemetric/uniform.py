"""Uniform structures on finite sets, pseudo uniform metrics, and metrics from bases.

On a finite set the filter generated by a family of entourages is principal:
it is everything above ``0_U``, the intersection of the family. Such a filter
is a uniform structure exactly when ``0_U`` is an equivalence relation. So
every finite uniform structure is trivial in the sense of being principal,
and constructions that assume non-triviality are carried out with the
index zero adjoined as a formal element below the base (see
:func:`metric_from_uniform_base`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .coarse import closure_bar
from .errors import HypothesisError, NotABaseError
from .metric import GenMetric
from .poset import INF, MonotoneMap, Poset
from .relset import GroundSet, Relation, canonical, diagonal, intersect_all

ZERO_LABEL = "0U"


@dataclass(frozen=True)
class PrincipalFilter:
    generator: Relation

    def __contains__(self, u: Relation) -> bool:
        return self.generator <= u

    @property
    def minimal_members(self) -> tuple[Relation, ...]:
        return (self.generator,)


@dataclass(frozen=True, eq=False)
class UniformBase:
    ground: GroundSet
    base: tuple[Relation, ...]

    def __post_init__(self):
        base = tuple(self.base)
        if not base:
            raise HypothesisError("a uniform base needs at least one member")
        delta = diagonal(self.ground)
        for b in base:
            if b.ground != self.ground:
                raise HypothesisError("base member over a different ground set")
            if not delta <= b:
                raise HypothesisError(f"base member {sorted(b)} does not contain the diagonal")
        object.__setattr__(self, "base", base)
        for b in base:
            inv = b.inverse()
            if not any(v <= inv for v in base):
                raise HypothesisError(f"no base member is contained in the inverse of {sorted(b)}")
            if not any(w.compose(w) <= b for w in base):
                raise HypothesisError(f"no base member W has W∘W inside {sorted(b)}")

    @cached_property
    def zero(self) -> Relation:
        """``0_U``: intersection of the base, hence of the whole filter."""
        return intersect_all(self.base)

    @property
    def filter(self) -> PrincipalFilter:
        return PrincipalFilter(self.zero)

    @property
    def trivial(self) -> bool:
        # a filter on a finite set always contains its own intersection
        return self.zero in self.filter

    @property
    def is_hausdorff(self) -> bool:
        return self.zero == diagonal(self.ground)

    @property
    def base_s(self) -> list[Relation]:
        return canonical(b.symmetrize_cap() for b in self.base)

    def same_filter(self, other: UniformBase) -> bool:
        return self.ground == other.ground and self.zero == other.zero


def generated_filter(ub: UniformBase) -> PrincipalFilter:
    return ub.filter


def zero_and_triviality(ub: UniformBase) -> tuple[Relation, bool]:
    return ub.zero, ub.trivial


def trivial_metric(ub: UniformBase) -> GenMetric:
    """Two-valued metric of a principal structure, over the chain ``0 < half < one``.

    Pairs in ``0_U`` get ``0``, all others ``one``; the middle element makes
    ``D_half = 0_U`` available as a base member.
    """
    if not ub.trivial:
        raise HypothesisError("only principal uniform structures have the two-valued metric")
    index = Poset.chain(3, ("0", "half", "1"), name="trivial")
    zero = ub.zero
    return GenMetric.from_function(ub.ground, index, lambda x, y: 0 if (x, y) in zero else 2, name="dtriv")


# pseudo uniform metrics


@dataclass(frozen=True)
class DIndexMetricCert:
    """A metric with a descent witness: ``D_psi(β) ∘ D_psi(β) ⊆ D_β`` for ``β ≠ 0``."""

    metric: GenMetric
    psi: MonotoneMap

    def __post_init__(self):
        d = self.metric
        z = d.index.zero
        for b in range(d.index.m):
            if b == z:
                continue
            a = self.psi(b)
            if a is None or a == z:
                raise HypothesisError(f"descent witness undefined or zero at {d.index.label(b)}")
            level = d.sublevels[a]
            if not level.compose(level) <= d.sublevels[b]:
                raise HypothesisError(f"descent witness fails at {d.index.label(b)}")


def is_pseudo_uniform_metric(d: GenMetric) -> DIndexMetricCert | None:
    """Descent witness for ``d`` or ``None``; ``psi(β) = β`` is preferred when it works."""
    idx = d.index
    if not idx.is_d_index():
        raise HypothesisError(f"index {idx.name} is not a D-index set")
    if not d.is_semi_metric():
        return None
    z = idx.zero
    table: list[int | None] = [None] * idx.m
    for b in range(idx.m):
        if b == z:
            continue
        target = d.sublevels[b]
        for a in [b] + [a for a in idx.linear_extension if a not in (b, z)]:
            level = d.sublevels[a]
            if level.compose(level) <= target:
                table[b] = a
                break
        else:
            return None
    return DIndexMetricCert(d, MonotoneMap(idx, idx, tuple(table)))


def is_uniform_metric(cert: DIndexMetricCert) -> bool:
    d = cert.metric
    idx = d.index
    z = idx.zero
    inter = intersect_all(d.sublevels[a] for a in range(idx.m) if a != z)
    result = inter == diagonal(d.ground)
    rest = ((1 << idx.m) - 1) & ~(1 << z)
    if idx.least_in(rest) is None:
        # no atom above zero: the zero-distance criterion must agree
        alt = all(d(x, y) != z for x in d.ground for y in d.ground if x != y)
        if alt != result:
            raise HypothesisError("intersection criterion and zero-distance criterion disagree")
    return result


def uniformity_from_metric(cert: DIndexMetricCert) -> UniformBase:
    d = cert.metric
    return UniformBase(d.ground, tuple(level for _, level in d.base_family()))


# metrics from intersection-closed bases


class ClosureError(HypothesisError):
    def __init__(self, members: tuple[Relation, ...]):
        super().__init__(
            f"base with 0_U is not closed under intersections; a subfamily of {len(members)} members fails"
        )
        self.members = members


def _closure_violation(family: Sequence[Relation], extra: Relation,
                       exhaustive_limit: int = 12) -> tuple[Relation, ...] | None:
    pool = canonical(list(family) + [extra])
    present = set(pool)
    if len(pool) <= exhaustive_limit:
        for k in range(2, len(pool) + 1):
            for sub in combinations(pool, k):
                if intersect_all(sub) not in present:
                    return sub
        return None
    for a, b in combinations(pool, 2):
        if (a & b) not in present:
            return (a, b)
    return None


def _require_base(ub: UniformBase, family: Sequence[Relation]) -> None:
    if not family:
        raise NotABaseError("empty family")
    for b in family:
        if b not in ub.filter:
            raise NotABaseError("member is not in the uniform structure", b)
    if ub.zero not in set(b.symmetrize_cap() for b in family):
        # on a finite set 0_U is in the filter, so a base must reach it
        raise NotABaseError("no member is contained in 0_U, so the family is not a base", ub.zero)


def metric_from_uniform_base(ub: UniformBase, family: Sequence[Relation]) -> GenMetric:
    """``d_B(x, y)``: intersection of the symmetrized base members containing ``(x, y)``.

    The index is the symmetrized base ordered by inclusion with a separate
    formal zero below it; pairs of ``0_U`` sit at that zero. Keeping the zero
    apart from the base member equal to ``0_U`` makes every sublevel equal to
    its index relation while leaving ``0_U`` among the nonzero sublevels, so
    the metric regenerates the original filter.
    """
    _require_base(ub, family)
    bad = _closure_violation(family, ub.zero)
    if bad is not None:
        raise ClosureError(bad)
    members = canonical(b.symmetrize_cap() for b in family)
    m = len(members) + 1
    up = [(1 << m) - 1]
    for a in members:
        up.append(sum(1 << (j + 1) for j, b in enumerate(members) if a <= b))
    index = Poset(tuple(up), (ZERO_LABEL,) + tuple(members), name="JB")
    zero = ub.zero

    def value(x, y):
        if (x, y) in zero:
            return 0
        containing = [r for r in members if (x, y) in r]
        if not containing:
            return INF
        return index.index_of(intersect_all(containing))

    return GenMetric.from_function(ub.ground, index, value, name="dB")


def index_relation(d: GenMetric, a: int, zero: Relation) -> Relation:
    e = d.index.elements[a]
    return zero if e == ZERO_LABEL else e


def s_equals_d_failures(d: GenMetric, zero: Relation) -> list[int]:
    """Indices ``S`` of a base metric whose sublevel differs from ``S`` itself."""
    return [a for a in range(d.index.m) if d.sublevels[a] != index_relation(d, a, zero)]


def uniform_base_cert(ub: UniformBase, family: Sequence[Relation]) -> DIndexMetricCert:
    """The base metric with the descent witness picking the first ``B`` with ``B ∘ B ⊆ S``."""
    d = metric_from_uniform_base(ub, family)
    idx = d.index
    table: list[int | None] = [None]
    for a in range(1, idx.m):
        s = idx.elements[a]
        pick = next(
            (b for b in range(1, idx.m) if idx.elements[b].compose(idx.elements[b]) <= s),
            None,
        )
        if pick is None:
            raise HypothesisError("base lacks a composition refinement for one of its members")
        table.append(pick)
    return DIndexMetricCert(d, MonotoneMap(idx, idx, tuple(table)))


def intersection_closed_base(ub: UniformBase, family: Sequence[Relation]) -> list[Relation]:
    """Intersection closure of a base, certified to be a base again.

    The hypothesis (for every pair outside ``0_U`` the members containing it
    intersect to an entourage) is checked and the first failing pair is
    reported. Because ``0_U`` is itself an entourage here it stays in the
    result; a closure consisting of ``0_U`` alone is rejected as degenerate.
    """
    _require_base(ub, family)
    zero = ub.zero
    full = Relation.full(ub.ground)
    for x in ub.ground:
        for y in ub.ground:
            if (x, y) in zero:
                continue
            containing = [a for a in family if (x, y) in a]
            inter = intersect_all(containing) if containing else full
            if inter not in ub.filter:
                raise HypothesisError(f"hypothesis fails at pair ({x}, {y})")
    closed = closure_bar(family)
    if not [b for b in closed if b != zero]:
        raise HypothesisError("closure minus 0_U is empty; degenerate principal case")
    for b in closed:
        if b not in ub.filter:
            raise NotABaseError("closure member outside the uniform structure", b)
    return closed


def has_intersection_closed_base(ub: UniformBase) -> list[Relation]:
    """A base whose union with ``{0_U}`` is intersection-closed.

    The structure's own symmetrized base is returned when it qualifies;
    otherwise ``[0_U]``, which always does on a finite set.
    """
    own = ub.base_s
    if ub.zero in own and _closure_violation(own, ub.zero) is None:
        return own
    return [ub.zero]


def is_totally_ordered_family(family: Sequence[Relation]) -> bool:
    return all(a <= b or b <= a for a, b in combinations(family, 2))


def totally_ordered_path(ub: UniformBase, family: Sequence[Relation]) -> DIndexMetricCert:
    """From a totally ordered base: close it under intersections, then build the base metric."""
    if not is_totally_ordered_family(family):
        raise HypothesisError("base is not totally ordered by inclusion")
    closed = intersection_closed_base(ub, family)
    return uniform_base_cert(ub, closed)


def congruence(ground: GroundSet, modulus: int) -> Relation:
    """``x ≡ y (mod modulus)`` on ``0..n-1``."""
    return Relation.from_pairs(
        ground, ((x, y) for x in ground for y in ground if (x - y) % modulus == 0)
    )


def congruence_chain(p: int, k: int) -> tuple[GroundSet, list[Relation]]:
    """``Z/p^k`` with the congruences modulo ``p^j`` for ``j = 0..k``."""
    ground = GroundSet(p ** k, name=f"Z{p ** k}")
    return ground, [congruence(ground, p ** j) for j in range(k + 1)]
