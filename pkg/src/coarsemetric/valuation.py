"""p-adic valuations on the integers and rationals, and the metrics they induce.

Values live in ``Z ∪ {ω}`` where ``ω`` exceeds every integer and absorbs
addition. Read in the reverse order ``≤_op``, ``ω`` is the zero, which is
what makes ``d(x, y) = ν(x - y)`` a metric with ``d(x, x) = ω``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence, Union

from .coarse import CoarseMetricCert
from .errors import HypothesisError
from .metric import GenMetric
from .poset import INF, MonotoneMap, Poset
from .relset import GroundSet
from .uniform import DIndexMetricCert, is_pseudo_uniform_metric

PRIME_LIMIT = 10 ** 6


class _Omega:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ω"

    def __reduce__(self):
        return (_Omega, ())


OMEGA = _Omega()
Value = Union[int, _Omega]
Element = Union[int, Fraction]


def add(a: Value, b: Value) -> Value:
    return OMEGA if a is OMEGA or b is OMEGA else a + b


def leq(a: Value, b: Value) -> bool:
    """The original order: ``ω`` above every integer."""
    if b is OMEGA:
        return True
    if a is OMEGA:
        return False
    return a <= b


def leq_op(a: Value, b: Value) -> bool:
    return leq(b, a)


def vmin(a: Value, b: Value) -> Value:
    return a if leq(a, b) else b


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PadicRing:
    p: int
    rational: bool = False

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p > PRIME_LIMIT or not is_prime(self.p):
            raise HypothesisError(f"{self.p!r} is not a prime up to {PRIME_LIMIT}")

    def element(self, x) -> Element:
        if isinstance(x, Fraction):
            if x.denominator != 1 and not self.rational:
                raise HypothesisError(f"{x} is not an integer")
            return x if self.rational else int(x)
        if isinstance(x, int):
            return Fraction(x) if self.rational else x
        raise TypeError(f"unsupported element {x!r}")


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuate(ring: PadicRing, x) -> Value:
    """``ν_p(x)``: exponent of ``p`` in ``x``; ``ν(0) = ω``."""
    x = ring.element(x)
    if x == 0:
        return OMEGA
    if isinstance(x, Fraction):
        return _int_valuation(x.numerator, ring.p) - _int_valuation(x.denominator, ring.p)
    return _int_valuation(x, ring.p)


@dataclass
class AxiomReport:
    pairs: int = 0
    v1: list[tuple] = field(default_factory=list)
    v2: list[tuple] = field(default_factory=list)
    v3: bool = True
    v4: bool = True
    v4_instances: int = 0
    strict_v2: list[tuple] = field(default_factory=list)
    inverse_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.v1 and not self.v2 and self.v3 and self.v4 and not self.inverse_failures

    def lines(self) -> list[str]:
        return [
            f"pairs checked: {self.pairs}",
            f"V1 multiplicative: {'ok' if not self.v1 else f'{len(self.v1)} failures'}",
            f"V2 ultrametric: {'ok' if not self.v2 else f'{len(self.v2)} failures'}"
            f" ({len(self.strict_v2)} strict instances)",
            f"V3 unit: {'ok' if self.v3 else 'failed'}",
            f"V4 zero: {'ok' if self.v4 else 'failed'} ({self.v4_instances} zeros in sample)",
        ]


def check_valuation_axioms(ring: PadicRing, sample: Iterable) -> AxiomReport:
    """Check the valuation axioms over all ordered pairs drawn from ``sample``."""
    items = [ring.element(x) for x in sample]
    if not items:
        raise HypothesisError("empty sample")
    rep = AxiomReport()
    rep.v3 = valuate(ring, 1) == 0
    rep.v4 = valuate(ring, 0) is OMEGA
    vals = {x: valuate(ring, x) for x in items}
    for x in items:
        if x == 0:
            rep.v4_instances += 1
            if vals[x] is not OMEGA:
                rep.v4 = False
        elif ring.rational:
            # ν(x) + ν(1/x) = ν(1) = 0 forces ν(x) ≠ ω
            if vals[x] is OMEGA or add(vals[x], valuate(ring, 1 / x)) != 0:
                rep.inverse_failures.append(x)
    for x, y in product(items, repeat=2):
        rep.pairs += 1
        vx, vy = vals[x], vals[y]
        if valuate(ring, x * y) != add(vx, vy):
            rep.v1.append((x, y))
        s = valuate(ring, x + y)
        low = vmin(vx, vy)
        if not leq(low, s):
            rep.v2.append((x, y))
        elif s != low:
            rep.strict_v2.append((x, y))
    return rep


OMEGA_LABEL = "omega"


def valuation_metric(ring: PadicRing, window: Sequence) -> GenMetric:
    """``d_ν(x, y) = ν(x - y)`` on a finite window.

    The index is the chain of attained values under ``≤_op``: ``ω`` first,
    then the valuations from largest to smallest. Elements are labelled
    ``omega`` and the decimal valuations.
    """
    items = [ring.element(x) for x in window]
    if len(set(items)) != len(items):
        raise HypothesisError("window has repeated elements")
    ground = GroundSet(len(items), tuple(str(x) for x in items), name="W")
    attained = sorted({valuate(ring, x - y) for x in items for y in items if x != y}, reverse=True)
    labels = (OMEGA_LABEL,) + tuple(str(v) for v in attained)
    index = Poset.chain(len(labels), labels, name=f"G{ring.p}")
    pos = {OMEGA: 0} | {v: i + 1 for i, v in enumerate(attained)}
    return GenMetric.from_function(
        ground, index, lambda i, j: pos[valuate(ring, items[i] - items[j])], name=f"dnu{ring.p}"
    )


def index_value(d: GenMetric, a) -> Value:
    """Valuation carried by index element ``a`` of a valuation metric."""
    if a is INF:
        raise ValueError("valuation metrics never take the value inf")
    label = d.index.elements[a]
    return OMEGA if label == OMEGA_LABEL else int(label)


def is_pseudo_ultra(d: GenMetric) -> bool:
    """``d(x, z) <= max(d(x, y), d(y, z))`` for all triples; needs a totally ordered index."""
    idx = d.index
    if not idx.is_totally_ordered():
        raise HypothesisError("the ultrametric inequality needs a totally ordered index")
    n = d.ground.n
    for x in range(n):
        for y in range(n):
            dxy = d(x, y)
            for z in range(n):
                dyz = d(y, z)
                top = dxy if idx.leq_ext(dyz, dxy) else dyz
                if not idx.leq_ext(d(x, z), top):
                    return False
    return True


@dataclass(frozen=True)
class CofinalityVerdict:
    status: str  # confirmed, inapplicable or refuted
    image: tuple[int, ...]
    cert: DIndexMetricCert | None
    reason: str

    def lines(self, d: GenMetric) -> list[str]:
        out = [
            "growth image: " + ", ".join(d.index.label(a) for a in self.image),
            f"criterion: {self.status} ({self.reason})",
        ]
        if self.cert is not None:
            z = d.index.zero
            out.append("descent witness: " + ", ".join(
                f"{d.index.label(b)}->{d.index.label(self.cert.psi(b))}"
                for b in range(d.index.m) if b != z
            ))
        return out


def descent_from_growth(cert: CoarseMetricCert) -> CofinalityVerdict:
    """Derive a descent witness from a growth witness whose image is downward cofinal.

    A non-cofinal image means the criterion says nothing, which is reported
    as ``inapplicable`` rather than as a failure.
    """
    d = cert.metric
    idx = d.index
    if not idx.is_upward_directed() or not idx.is_d_index():
        raise HypothesisError("index must be upward directed and a D-index set")
    z = idx.zero
    nonzero = [a for a in range(idx.m) if a != z]
    image = tuple(sorted({cert.phi(a) for a in nonzero}))
    if z in image:
        return CofinalityVerdict("inapplicable", image, None, "the growth image contains zero")
    for a in nonzero:
        if not any(idx.leq(b, a) for b in image):
            return CofinalityVerdict("inapplicable", image, None,
                                     f"nothing in the image lies below {idx.label(a)}")
    table: list[int | None] = [None] * idx.m
    for b in nonzero:
        order = [b] + [a for a in idx.linear_extension if a not in (b, z)]
        table[b] = next(a for a in order if idx.leq(cert.phi(a), b))
    try:
        psi = DIndexMetricCert(d, MonotoneMap(idx, idx, tuple(table)))
    except HypothesisError as exc:
        return CofinalityVerdict("refuted", image, None, str(exc))
    if is_pseudo_uniform_metric(d) is None:
        return CofinalityVerdict("refuted", image, None, "independent descent search failed")
    return CofinalityVerdict("confirmed", image, psi, "image is downward cofinal")


def parse_window(text: str) -> list[int]:
    """``a..b`` (inclusive) or a comma list of integers."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        a, b = int(lo), int(hi)
        if b < a:
            raise ValueError(f"empty window {text!r}")
        return list(range(a, b + 1))
    return [int(t) for t in text.split(",") if t.strip()]
