"""Hausdorff coarse structure and Hausdorff metric on nonempty subsets.

The hyperspace of a ground set with ``n`` points has ``2**n - 1`` points,
listed by size and then by bitmask, so the singleton ``{x}`` sits at index
``x``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import config
from .coarse import (
    CoarseMetricCert,
    CoarseStructure,
    generate,
    is_coarse_metric,
    structure_from_metric,
)
from .errors import CapacityError, GroundMismatchError, HypothesisError
from .metric import GenMetric
from .poset import INF, MonotoneMap, Poset
from .relset import GroundSet, Relation, bits

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Hyperspace:
    base: GroundSet

    def __post_init__(self):
        limit = config.max_hyperspace_base()
        if self.base.n > limit:
            raise CapacityError(f"hyperspace of a {self.base.n}-point set exceeds the limit {limit}")

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sorted(range(1, 1 << self.base.n), key=lambda m: (m.bit_count(), m)))

    @cached_property
    def position(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.masks)}

    @cached_property
    def ground(self) -> GroundSet:
        labels = tuple(
            "{" + ",".join(self.base.label(i) for i in bits(m)) + "}" for m in self.masks
        )
        return GroundSet(len(self.masks), labels, name=f"P0({self.base.name})")

    def subset(self, i: int) -> frozenset[int]:
        return frozenset(bits(self.masks[i]))

    def index(self, elements: Iterable[int]) -> int:
        mask = self.base.mask(elements)
        if not mask:
            raise ValueError("the hyperspace has no empty set")
        return self.position[mask]

    def singleton(self, x: int) -> int:
        return self.position[1 << x]


def _hyperspace_for(ground: GroundSet, hs: Hyperspace | None) -> Hyperspace:
    if hs is None:
        return Hyperspace(ground)
    if hs.base != ground:
        raise GroundMismatchError("hyperspace built over another ground set")
    return hs


def check_entourage(e: Relation, hs: Hyperspace | None = None) -> Relation:
    """``Ě``: pairs ``(R, S)`` with ``R ⊆ E[S]`` and ``S ⊆ E[R]``."""
    hs = _hyperspace_for(e.ground, hs)
    masks = hs.masks
    images = [e.image_mask(m) for m in masks]
    rows = []
    for i, r in enumerate(masks):
        row = 0
        for j, s in enumerate(masks):
            if r & ~images[j] == 0 and s & ~images[i] == 0:
                row |= 1 << j
        rows.append(row)
    return Relation(hs.ground, tuple(rows))


def hausdorff_structure(structure: CoarseStructure, base: Sequence[Relation] | None = None,
                        hs: Hyperspace | None = None) -> CoarseStructure:
    """Structure on the hyperspace generated by ``Ě`` for ``E`` in ``I^E``.

    With ``base`` given, the generators are the checks of its cap-symmetrized
    members instead.
    """
    hs = _hyperspace_for(structure.ground, hs)
    if base is None:
        gens = structure.members_sym
    else:
        gens = [b.symmetrize_cap() for b in base]
    return generate(hs.ground, [check_entourage(g, hs) for g in gens])


def _covering_indices(d: GenMetric, hs: Hyperspace, r: int, s: int) -> int:
    mask = 0
    for a, level in enumerate(d.sublevels):
        if r & ~level.image_mask(s) == 0 and s & ~level.image_mask(r) == 0:
            mask |= 1 << a
    return mask


def hausdorff_metric(d: GenMetric, hs: Hyperspace | None = None) -> GenMetric:
    """``ď(R, S)``: meet of the radii at which ``R`` and ``S`` cover each other."""
    idx = d.index
    if not idx.is_meet_complete():
        raise HypothesisError(f"index {idx.name} is not meet-complete; the infimum may not exist")
    hs = _hyperspace_for(d.ground, hs)
    masks = hs.masks
    values = []
    for r in masks:
        row = []
        for s in masks:
            ok = _covering_indices(d, hs, r, s)
            row.append(INF if not ok else idx.greatest_in(idx.lower_bounds(bits(ok))))
        values.append(tuple(row))
    return GenMetric(hs.ground, idx, tuple(values), name=f"{d.name}^")


def hausdorff_cert(d: GenMetric, hs: Hyperspace | None = None) -> CoarseMetricCert:
    """Growth witness for ``ď`` on a totally ordered meet-complete index.

    ``phi~(α) = α`` at the top, otherwise ``phi(β(α))`` with ``β(α)`` the
    least strict upper bound of ``α`` and ``phi`` the least growth witness
    of ``d``.
    """
    idx = d.index
    if not idx.is_totally_ordered():
        raise HypothesisError("certification needs a totally ordered index")
    cert = is_coarse_metric(d)
    if cert is None:
        raise HypothesisError("metric is not a coarse metric")
    table = []
    for a in range(idx.m):
        strict = idx.up[a] & ~(1 << a)
        if not strict:
            table.append(a)
        else:
            table.append(cert.phi(idx.least_in(strict)))
    dh = hausdorff_metric(d, hs)
    return CoarseMetricCert(dh, MonotoneMap(idx, idx, tuple(table)))


@dataclass(frozen=True)
class HausdorffVerdict:
    equal: bool
    induced: CoarseStructure
    hausdorff: CoarseStructure
    differing: tuple[int, int] | None

    def lines(self, hs: Hyperspace) -> list[str]:
        out = [f"structure induced by the Hausdorff metric equals the Hausdorff structure: {self.equal}"]
        if self.differing is not None:
            r, s = self.differing
            out.append(f"differing pair: ({hs.ground.label(r)}, {hs.ground.label(s)})")
        return out


def compare_hausdorff(d: GenMetric, hs: Hyperspace | None = None) -> HausdorffVerdict:
    hs = _hyperspace_for(d.ground, hs)
    induced = structure_from_metric(hausdorff_metric(d, hs))
    expected = hausdorff_structure(structure_from_metric(d), hs=hs)
    diff = None
    if induced != expected:
        sym = (induced.top - expected.top) | (expected.top - induced.top)
        diff = min(sym)
    return HausdorffVerdict(induced == expected, induced, expected, diff)


def verify_hausdorff_agreement(d: GenMetric, structure: CoarseStructure | None = None,
                     hs: Hyperspace | None = None) -> HausdorffVerdict:
    """Compare the structure induced by ``ď`` with the Hausdorff structure of ``E_d``.

    Only for meet-complete totally ordered indices, where the two agree.
    """
    idx = d.index
    if not (idx.is_meet_complete() and idx.is_totally_ordered()):
        raise HypothesisError("index must be meet-complete and totally ordered")
    if structure is not None and structure_from_metric(d) != structure:
        raise HypothesisError("the metric does not induce the given coarse structure")
    return compare_hausdorff(d, hs)


# experiment harness for non-totally-ordered indices


@dataclass(frozen=True)
class Counterexample:
    question: int
    metric: GenMetric
    detail: str


@dataclass
class SearchReport:
    witness: Counterexample | None
    steps: int
    budget: int
    completed: bool
    examined: int = 0
    skipped_not_coarse: int = 0
    pool_used: list[str] = field(default_factory=list)
    pool_rejected: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [
            f"pool: {', '.join(self.pool_used) or '(empty)'}",
            f"rejected from pool: {', '.join(self.pool_rejected) or '(none)'}",
            f"steps: {self.steps} of budget {self.budget}",
            f"search completed: {self.completed}",
            f"metrics examined: {self.examined}, not coarse (skipped): {self.skipped_not_coarse}",
        ]
        if self.witness is None:
            out.append("outcome: no counterexample within bounds")
        else:
            out.append(f"outcome: counterexample to question ({self.witness.question}): {self.witness.detail}")
        return out


def _eligible(p: Poset) -> bool:
    return (p.zero is not None and p.is_upward_directed() and p.is_meet_complete()
            and not p.is_totally_ordered())


def search_counterexample(n_max: int, index_pool: Sequence[Poset],
                          step_budget: int = 100_000) -> SearchReport:
    """Look for metrics where ``ď`` is not coarse, or induces a structure other than ``Ě_d``.

    Every semi-metric on ``2..n_max`` points with values in each eligible
    index (meet-complete, upward directed, not totally ordered) is tried in
    a fixed order. One step is one candidate metric; the search stops at the
    first failure or when the budget runs out.
    """
    report = SearchReport(None, 0, step_budget, True)
    pool = []
    for p in index_pool:
        if _eligible(p):
            pool.append(p)
        else:
            report.pool_rejected.append(p.name)
    report.pool_used = [p.name for p in pool]
    for n in range(2, n_max + 1):
        ground = GroundSet(n, name=f"X{n}")
        hs = Hyperspace(ground)
        pairs = [(x, y) for x in range(n) for y in range(x + 1, n)]
        for idx in pool:
            choices = list(range(idx.m)) + [INF]
            for assignment in itertools.product(choices, repeat=len(pairs)):
                if report.steps >= step_budget:
                    report.completed = False
                    return report
                report.steps += 1
                table = [[idx.zero] * n for _ in range(n)]
                for (x, y), v in zip(pairs, assignment):
                    table[x][y] = table[y][x] = v
                d = GenMetric(ground, idx, tuple(map(tuple, table)))
                if is_coarse_metric(d) is None:
                    report.skipped_not_coarse += 1
                    continue
                report.examined += 1
                dh = hausdorff_metric(d, hs)
                if is_coarse_metric(dh) is None:
                    report.witness = Counterexample(1, d, f"Hausdorff metric over {idx.name} is not coarse")
                    log.info("question 1 counterexample found over %s", idx.name)
                    return report
                verdict = compare_hausdorff(d, hs)
                if not verdict.equal:
                    report.witness = Counterexample(
                        2, d, f"induced structure differs from the Hausdorff structure over {idx.name}"
                    )
                    log.info("question 2 counterexample found over %s", idx.name)
                    return report
    return report
