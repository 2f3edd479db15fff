"""Command-line front end.

Reports go to standard output: verdict lines start with ``# `` and are
followed by object blocks in the text format of :mod:`coarsemetric.textio`,
so a report can be fed back in as input. Exit codes: 0 when everything was
constructed or verified, 1 when a checked property fails (the report names a
witness), 2 on malformed input or an unmet precondition.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Sequence

from . import coarse, hyperspace, props, structural, textio, uniform, valuation
from .errors import CoarseMetricError, FormatError, NotABaseError
from .fixtures import POOLS
from .metric import GenMetric
from .relset import Relation

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Report:
    def __init__(self):
        self.verdicts: list[str] = []
        self.blocks: list[str] = []

    def say(self, text: str = ""):
        self.verdicts.append(text)

    def table(self, d: GenMetric):
        for line in d.table_lines():
            self.say("  " + line)

    def block(self, text: str):
        self.blocks.append(text)

    def render(self) -> str:
        head = "".join(f"# {v}\n" if v else "#\n" for v in self.verdicts)
        return head + "".join(self.blocks)


def _pairs(r: Relation) -> str:
    g = r.ground
    return "{" + ", ".join(f"({g.label(x)},{g.label(y)})" for x, y in sorted(r)) + "}"


def _phi_line(name: str, d: GenMetric, table) -> str:
    idx = d.index
    return f"{name}: " + ", ".join(f"{idx.label(a)}->{idx.label(table(a))}" for a in range(idx.m))


def _structure_summary(rep: Report, s: coarse.CoarseStructure):
    rep.say(f"ground size: {s.ground.n}")
    rep.say(f"largest member: {_pairs(s.top)}")
    rep.say(f"coarsely connected classes: {[sorted(c) for c in s.classes()]}")
    try:
        rep.say(f"|I^E| = {len(s.members_sym)}")
    except CoarseMetricError as exc:
        rep.say(f"|I^E| not enumerated: {exc}")


# subcommands


def cmd_check_coarse(args, ws: textio.Workspace, rep: Report) -> int:
    use_metric = args.metric or not (args.structure or args.family or ws.families)
    if use_metric:
        d = ws.get("metric", args.metric)
        cert = coarse.is_coarse_metric(d)
        if cert is None:
            rep.say(f"metric {d.name}: NOT a coarse metric")
            for a in range(d.index.m):
                sq = d.sublevels[a].compose(d.sublevels[a])
                if not any(sq <= s for s in d.sublevels):
                    rep.say(f"witness: D_{d.index.label(a)} composed with itself fits in no sublevel")
                    break
            return EXIT_FAIL
        rep.say(f"metric {d.name}: coarse metric")
        rep.say(_phi_line("growth witness", d, cert.phi))
        rep.say(f"growth witness increasing: {cert.increasing}")
        s = coarse.structure_from_metric(cert)
        _structure_summary(rep, s)
        rep.block(textio.dump_structure("Ed", s))
        return EXIT_OK
    if args.structure:
        s = ws.get("structure", args.structure)
        rep.say(f"structure {args.structure}: valid coarse structure")
        _structure_summary(rep, s)
        return EXIT_OK
    family = ws.get("family", args.family)
    g = family[0].ground if family else next(iter(ws.grounds.values()))
    violation = coarse.check_family(g, family)
    if violation is not None:
        rep.say(f"NOT a coarse structure: {violation.kind} axiom fails")
        rep.say(f"witness: {violation.message}")
        for r in violation.members:
            rep.say(f"  {_pairs(r)}")
        return EXIT_FAIL
    s = coarse.CoarseStructure.from_members(g, family)
    rep.say("family is the complete list of symmetric reflexive members of a coarse structure")
    _structure_summary(rep, s)
    return EXIT_OK


def cmd_saturate(args, ws, rep) -> int:
    s = ws.get("structure", args.structure)
    d = coarse.saturated_metric(s)
    rep.say(f"saturated metric over I^E with {d.index.m} elements")
    for a, r in enumerate(d.index.elements):
        rep.say(f"  {d.index.label(a)} = {_pairs(r)}")
    rep.table(d)
    rep.say(f"saturated: {coarse.is_saturated(d)}")
    rep.say(f"induces the structure back: {coarse.structure_from_metric(d) == s}")
    rep.block(textio.dump_metric_bundle(d))
    return EXIT_OK


def cmd_from_base(args, ws, rep) -> int:
    family = ws.get("family", args.family)
    s = ws.get("structure", args.structure) if args.structure else None
    try:
        d = coarse.metric_from_base(family, s)
    except NotABaseError as exc:
        rep.say(f"NOT a base: {exc}")
        if exc.member is not None:
            rep.say(f"witness member: {_pairs(exc.member)}")
        return EXIT_FAIL
    cert = coarse.base_cert(family, s)
    rep.say(f"base metric over the intersection closure ({d.index.m} elements)")
    rep.table(d)
    rep.say(_phi_line("growth witness", d, cert.phi))
    induced = coarse.structure_from_metric(d)
    target = s if s is not None else coarse.generate(d.ground, family)
    ok = induced == target
    rep.say(f"induces the structure of the base: {ok}")
    rep.block(textio.dump_metric_bundle(d))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dominate(args, ws, rep) -> int:
    d = ws.get("metric", args.metric)
    other = ws.get("metric", args.other)
    w = coarse.dominates(d, other)
    structural_ok = coarse.structure_from_metric(other) <= coarse.structure_from_metric(d)
    rep.say(f"structure of {other.name} inside structure of {d.name}: {structural_ok}")
    if w is None:
        rep.say(f"{d.name} does NOT dominate {other.name}")
        for a, s in enumerate(other.sublevels):
            if not any(s <= t for t in d.sublevels):
                rep.say(f"witness: D'_{other.index.label(a)} = {_pairs(s)} lies in no sublevel of {d.name}")
                break
        return EXIT_FAIL
    rep.say(f"{d.name} dominates {other.name} (witness kind: {w.kind}, increasing: {w.increasing})")
    rep.say("witness: " + ", ".join(
        f"{other.index.label(a)}->{d.index.label(b)}" for a, b in enumerate(w.gamma.table)))
    rep.say(f"equivalent: {coarse.equivalent(d, other)}")
    return EXIT_OK


def cmd_props(args, ws, rep) -> int:
    dx = ws.get("metric", args.source_metric)
    dy = ws.get("metric", args.target_metric)
    f = ws.get("map", args.map)
    sx, sy = coarse.structure_from_metric(dx), coarse.structure_from_metric(dy)
    mismatches = []

    def pair(label, metric_side, structural_side):
        rep.say(f"{label}: {metric_side}")
        if metric_side != structural_side:
            mismatches.append(label)

    pair(f"{dx.name} coarsely connected", props.is_coarsely_connected(sx, dx),
         structural.is_coarsely_connected(sx))
    pair(f"{dy.name} coarsely connected", props.is_coarsely_connected(sy, dy),
         structural.is_coarsely_connected(sy))
    pair("bornologous", props.is_bornologous(f, dx, dy), structural.is_bornologous(f, sx, sy))
    pair("proper", props.is_proper(f, dx, dy) is not None, structural.is_proper(f, sx, sy))
    pair("effectively proper", props.is_effectively_proper(f, dx, dy),
         structural.is_effectively_proper(f, sx, sy))
    if args.other_map:
        g = ws.get("map", args.other_map)
        beta = props.are_close(f, g, dy)
        rep.say(f"close to {args.other_map}: {beta is not None}"
                + ("" if beta is None else f" (bound {dy.index.label(beta)})"))
        if (beta is not None) != structural.are_close(f, g, sy):
            mismatches.append("close")
    if args.subset:
        subset = [dx.ground.index(t) for t in args.subset.split(",")]
        w = props.is_bounded(sx, dx, subset)
        rep.say(f"subset bounded: {w is not None}"
                + ("" if w is None else f" (ball at {dx.ground.label(w[0])} radius {dx.index.label(w[1])})"))
        if (w is not None) != structural.is_bounded(sx, subset):
            mismatches.append("bounded")
    if mismatches:
        rep.say("metric and structural criteria DISAGREE on: " + ", ".join(mismatches))
        return EXIT_FAIL
    rep.say("metric and structural criteria agree")
    return EXIT_OK


def cmd_bounded_geometry(args, ws, rep) -> int:
    d = ws.get("metric", args.metric)
    s = coarse.structure_from_metric(d)
    r = props.bounded_geometry_report(s, d)
    for line in r.lines(d.index.label):
        rep.say(line)
    rep.say("verdicts: " + ", ".join(f"{k}={v}" for k, v in r.verdicts.items()))
    return EXIT_OK if r.sandwich_ok and r.transformed_ok and all(r.verdicts.values()) else EXIT_FAIL


def cmd_hausdorff(args, ws, rep) -> int:
    d = ws.get("metric", args.metric)
    hs = hyperspace.Hyperspace(d.ground)
    dh = hyperspace.hausdorff_metric(d, hs)
    rep.say(f"Hausdorff metric on {hs.ground.n} nonempty subsets")
    rep.table(dh)
    cert = coarse.is_coarse_metric(dh)
    rep.say(f"Hausdorff metric is a coarse metric: {cert is not None}")
    verdict = hyperspace.compare_hausdorff(d, hs)
    for line in verdict.lines(hs):
        rep.say(line)
    rep.block(textio.dump_metric_bundle(dh))
    if d.index.is_totally_ordered():
        hyperspace.hausdorff_cert(d, hs)
        rep.say("totally ordered index: growth witness for the Hausdorff metric certified")
        return EXIT_OK if verdict.equal else EXIT_FAIL
    rep.say("index not totally ordered: outcome reported, not asserted")
    return EXIT_OK


def cmd_uniformize(args, ws, rep) -> int:
    ub = ws.get("uniform", args.uniform)
    zero, trivial = uniform.zero_and_triviality(ub)
    rep.say(f"0_U = {_pairs(zero)}")
    rep.say(f"principal (trivial): {trivial}; every uniform structure on a finite set is")
    rep.say(f"Hausdorff (0_U is the diagonal): {ub.is_hausdorff}")
    family = ws.get("family", args.family) if args.family else list(ub.base)
    try:
        cert = uniform.uniform_base_cert(ub, family)
    except uniform.ClosureError as exc:
        rep.say(f"NOT intersection closed: {exc}")
        rep.say("witness subfamily: " + "; ".join(_pairs(r) for r in exc.members))
        return EXIT_FAIL
    except NotABaseError as exc:
        rep.say(f"NOT a base: {exc}")
        return EXIT_FAIL
    d = cert.metric
    rep.say(f"base metric over {d.index.m} index elements (formal zero plus the symmetrized base)")
    rep.table(d)
    rep.say(_phi_line("descent witness", d, lambda a: a if cert.psi(a) is None else cert.psi(a)))
    bad = uniform.s_equals_d_failures(d, ub.zero)
    rep.say(f"every sublevel equals its index relation: {not bad}")
    regen = uniform.uniformity_from_metric(cert)
    same = regen.same_filter(ub)
    rep.say(f"regenerated filter equals the original: {same}")
    rep.say(f"uniform metric: {uniform.is_uniform_metric(cert)}")
    rep.block(textio.dump_metric_bundle(d))
    return EXIT_OK if not bad and same else EXIT_FAIL


def cmd_padic(args, ws, rep) -> int:
    ring = valuation.PadicRing(args.prime)
    window = valuation.parse_window(args.window)
    d = valuation.valuation_metric(ring, window)
    rep.say(f"p = {args.prime}, window {window[0]}..{window[-1]} ({len(window)} points); claims are window-relative")
    rep.table(d)
    axioms = valuation.check_valuation_axioms(ring, window)
    for line in axioms.lines():
        rep.say(line)
    ultra = valuation.is_pseudo_ultra(d)
    rep.say(f"pseudo ultra: {ultra}")
    cert = coarse.is_coarse_metric(d)
    rep.say(_phi_line("growth witness", d, cert.phi))
    verdict = valuation.descent_from_growth(cert)
    for line in verdict.lines(d):
        rep.say(line)
    rep.block(textio.dump_metric_bundle(d))
    ok = axioms.ok and ultra and verdict.status == "confirmed"
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(args, ws, rep) -> int:
    pool = [POOLS[name]() for name in args.pool]
    report = hyperspace.search_counterexample(args.n_max, pool, args.budget)
    for line in report.lines():
        rep.say(line)
    if report.witness is not None:
        rep.block(textio.dump_metric_bundle(report.witness.metric))
    return EXIT_OK


COMMANDS: dict[str, Callable] = {
    "check-coarse": cmd_check_coarse,
    "saturate": cmd_saturate,
    "from-base": cmd_from_base,
    "dominate": cmd_dominate,
    "props": cmd_props,
    "bounded-geometry": cmd_bounded_geometry,
    "hausdorff": cmd_hausdorff,
    "uniformize": cmd_uniformize,
    "padic": cmd_padic,
    "search-counterexample": cmd_search,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coarsemetric",
        description="Finite coarse and uniform structures and their poset-valued metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--in", dest="inputs", action="append", required=True, metavar="FILE",
                       help="input file in the block format (repeatable)")
        return p

    p = with_input("check-coarse", "validate a family, structure or metric")
    p.add_argument("--family")
    p.add_argument("--structure")
    p.add_argument("--metric")
    p = with_input("saturate", "saturated metric of a structure")
    p.add_argument("--structure")
    p = with_input("from-base", "metric from a base of a structure")
    p.add_argument("--family")
    p.add_argument("--structure")
    p = with_input("dominate", "does --metric dominate --other")
    p.add_argument("--metric", required=True)
    p.add_argument("--other", required=True)
    p = with_input("props", "coarse properties of a map between metric spaces")
    p.add_argument("--source-metric", required=True)
    p.add_argument("--target-metric", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--other-map")
    p.add_argument("--subset", help="comma-separated points of the source to test for boundedness")
    p = with_input("bounded-geometry", "bounded geometry witnesses")
    p.add_argument("--metric")
    p = with_input("hausdorff", "Hausdorff metric on nonempty subsets")
    p.add_argument("--metric")
    p = with_input("uniformize", "metric from an intersection-closed uniform base")
    p.add_argument("--uniform")
    p.add_argument("--family")
    p = sub.add_parser("padic", help="p-adic valuation metric on a window of integers")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--window", required=True, help="a..b or a comma list")
    p = sub.add_parser("search-counterexample", help="search non-chain indices for Hausdorff failures")
    p.add_argument("--pool", action="append", choices=sorted(POOLS), default=None)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--budget", type=int, default=100_000)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "search-counterexample" and not args.pool:
        args.pool = ["diamond"]
    rep = Report()
    try:
        ws = textio.load_paths(args.inputs) if getattr(args, "inputs", None) else textio.Workspace()
        code = COMMANDS[args.command](args, ws, rep)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CoarseMetricError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(rep.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
