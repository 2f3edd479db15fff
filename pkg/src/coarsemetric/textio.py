"""Plain-text container format: one block per object, ``#`` starts a comment.

::

    ground X 4 a b c d
    relation E over X
    a b
    end
    relation F over X
    a a
    b b
    c c
    d d
    a b
    b a
    end
    poset I
    elems 3 zero one two
    zero <= one
    one <= two
    end
    metric d over X index I
    a b one
    a c inf
    a d inf
    b c two
    b d inf
    c d inf
    end
    structure S over X generated
    E
    end
    family B over X
    E
    end
    uniform U over X
    F
    end
    map f from X to X
    a a b b
    end

Points and index elements may be given by label or by position. Poset
blocks are closed transitively and reflexively. Metric blocks need one of
``x y`` or ``y x`` for each off-diagonal pair; the diagonal defaults to the
zero. A ``structure`` block without ``generated`` must list every symmetric
reflexive controlled set and is checked against the axioms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .coarse import CoarseStructure, StructureError, check_family, generate
from .errors import CoarseMetricError, FormatError
from .metric import GenMetric
from .poset import INF, Poset
from .props import SpaceMap
from .relset import GroundSet, Relation
from .uniform import UniformBase

KINDS = ("ground", "relation", "poset", "metric", "structure", "family", "uniform", "map")


@dataclass
class Workspace:
    source: str = "<input>"
    grounds: dict[str, GroundSet] = field(default_factory=dict)
    relations: dict[str, Relation] = field(default_factory=dict)
    posets: dict[str, Poset] = field(default_factory=dict)
    metrics: dict[str, GenMetric] = field(default_factory=dict)
    structures: dict[str, CoarseStructure] = field(default_factory=dict)
    families: dict[str, list[Relation]] = field(default_factory=dict)
    uniforms: dict[str, UniformBase] = field(default_factory=dict)
    maps: dict[str, SpaceMap] = field(default_factory=dict)

    def table(self, kind: str) -> dict:
        return {
            "ground": self.grounds, "relation": self.relations, "poset": self.posets,
            "metric": self.metrics, "structure": self.structures, "family": self.families,
            "uniform": self.uniforms, "map": self.maps,
        }[kind]

    def get(self, kind: str, name: str | None):
        table = self.table(kind)
        if name is None:
            if len(table) != 1:
                raise CoarseMetricError(f"expected exactly one {kind} in the input, found {len(table)}; name one")
            return next(iter(table.values()))
        if name not in table:
            raise CoarseMetricError(f"no {kind} named {name!r}")
        return table[name]


@dataclass(frozen=True)
class _Line:
    number: int
    tokens: tuple[tuple[str, int], ...]  # (text, 1-based column)


def _lines(text: str) -> Iterator[_Line]:
    for number, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        tokens, i = [], 0
        while i < len(body):
            if body[i].isspace():
                i += 1
                continue
            j = i
            while j < len(body) and not body[j].isspace():
                j += 1
            tokens.append((body[i:j], i + 1))
            i = j
        if tokens:
            yield _Line(number, tuple(tokens))


class _Parser:
    def __init__(self, text: str, ws: Workspace):
        self.ws = ws
        self.lines = list(_lines(text))
        self.pos = 0

    def fail(self, message: str, line: _Line | None, k: int = 0):
        if line is None:
            raise FormatError(message, 0, 0, self.ws.source)
        col = line.tokens[k][1] if k < len(line.tokens) else line.tokens[-1][1] + len(line.tokens[-1][0])
        raise FormatError(message, line.number, col, self.ws.source)

    def expect(self, line: _Line, k: int, word: str):
        if len(line.tokens) <= k or line.tokens[k][0] != word:
            self.fail(f"expected {word!r}", line, k)

    def token(self, line: _Line, k: int, what: str) -> str:
        if len(line.tokens) <= k:
            self.fail(f"missing {what}", line, k)
        return line.tokens[k][0]

    def ref(self, kind: str, line: _Line, k: int):
        name = self.token(line, k, f"{kind} name")
        table = self.ws.table(kind)
        if name not in table:
            self.fail(f"unknown {kind} {name!r}", line, k)
        return table[name]

    def new_name(self, kind: str, line: _Line) -> str:
        name = self.token(line, 1, f"{kind} name")
        if name in self.ws.table(kind):
            self.fail(f"duplicate {kind} name {name!r}", line, 1)
        return name

    def body(self, header: _Line) -> list[_Line]:
        out = []
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            self.pos += 1
            if line.tokens[0][0] == "end":
                if len(line.tokens) > 1:
                    self.fail("unexpected text after 'end'", line, 1)
                return out
            out.append(line)
        self.fail(f"block {header.tokens[0][0]} {header.tokens[1][0]} is missing 'end'", header, 0)

    def point(self, ground: GroundSet, line: _Line, k: int) -> int:
        tok = self.token(line, k, "point")
        if ground.labels is not None and tok in ground.labels:
            return ground.labels.index(tok)
        try:
            x = int(tok)
        except ValueError:
            self.fail(f"{tok!r} is not a point of {ground.name}", line, k)
        if not 0 <= x < ground.n:
            self.fail(f"point {x} out of range for {ground.name}", line, k)
        return x

    def elem(self, poset: Poset, line: _Line, k: int, allow_inf: bool = False):
        tok = self.token(line, k, "index element")
        if allow_inf and tok == "inf":
            return INF
        if tok in poset.elements:
            return poset.elements.index(tok)
        try:
            a = int(tok)
        except ValueError:
            self.fail(f"{tok!r} is not an element of {poset.name}", line, k)
        if not 0 <= a < poset.m:
            self.fail(f"element {a} out of range for {poset.name}", line, k)
        return a

    def run(self) -> Workspace:
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            self.pos += 1
            kind = line.tokens[0][0]
            if kind not in KINDS:
                self.fail(f"unknown block {kind!r}; expected one of {', '.join(KINDS)}", line, 0)
            try:
                getattr(self, "parse_" + kind)(line)
            except FormatError:
                raise
            except ValueError as exc:
                self.fail(str(exc), line, 0)
        return self.ws

    def parse_ground(self, line: _Line):
        name = self.new_name("ground", line)
        tok = self.token(line, 2, "size")
        try:
            n = int(tok)
        except ValueError:
            self.fail(f"size {tok!r} is not an integer", line, 2)
        labels = tuple(t for t, _ in line.tokens[3:]) or None
        if labels is not None and len(labels) != n:
            self.fail(f"expected {n} labels, got {len(labels)}", line, 3)
        if labels is not None and "inf" in labels:
            self.fail("'inf' is reserved and cannot label a point", line, 3 + labels.index("inf"))
        self.ws.grounds[name] = GroundSet(n, labels, name=name)

    def _over(self, line: _Line, k: int = 2) -> GroundSet:
        self.expect(line, k, "over")
        return self.ref("ground", line, k + 1)

    def parse_relation(self, line: _Line):
        name = self.new_name("relation", line)
        ground = self._over(line)
        pairs = []
        for row in self.body(line):
            if len(row.tokens) != 2:
                self.fail("expected a pair 'x y'", row, min(len(row.tokens), 2))
            pairs.append((self.point(ground, row, 0), self.point(ground, row, 1)))
        self.ws.relations[name] = Relation.from_pairs(ground, pairs)

    def parse_poset(self, line: _Line):
        name = self.new_name("poset", line)
        rows = self.body(line)
        if not rows or rows[0].tokens[0][0] != "elems":
            self.fail("poset block must start with 'elems <count> [names]'", rows[0] if rows else line, 0)
        head = rows[0]
        try:
            m = int(self.token(head, 1, "element count"))
        except ValueError:
            self.fail("element count is not an integer", head, 1)
        names = tuple(t for t, _ in head.tokens[2:])
        if names and len(names) != m:
            self.fail(f"expected {m} element names, got {len(names)}", head, 2)
        if len(set(names)) != len(names):
            self.fail("element names must be distinct", head, 2)
        shell = Poset.chain(m, names, name=name) if m > 0 else None
        if shell is None:
            self.fail("a poset needs at least one element", head, 1)
        pairs = []
        for row in rows[1:]:
            if len(row.tokens) != 3 or row.tokens[1][0] != "<=":
                self.fail("expected 'a <= b'", row, 1 if len(row.tokens) > 1 else 0)
            pairs.append((self.elem(shell, row, 0), self.elem(shell, row, 2)))
        self.ws.posets[name] = Poset.from_pairs(m, pairs, names, name=name)

    def parse_metric(self, line: _Line):
        name = self.new_name("metric", line)
        ground = self._over(line)
        self.expect(line, 4, "index")
        index = self.ref("poset", line, 5)
        if index.zero is None:
            self.fail(f"index {index.name} has no zero", line, 5)
        given: dict[tuple[int, int], tuple] = {}
        for row in self.body(line):
            if len(row.tokens) != 3:
                self.fail("expected 'x y value'", row, min(len(row.tokens), 3))
            x, y = self.point(ground, row, 0), self.point(ground, row, 1)
            v = self.elem(index, row, 2, allow_inf=True)
            if (x, y) in given:
                self.fail(f"pair ({x}, {y}) given twice", row, 0)
            if x == y and v != index.zero:
                self.fail("diagonal value must be the zero", row, 2)
            back = given.get((y, x))
            if back is not None and back[0] != v:
                self.fail(f"value disagrees with the one given for ({y}, {x})", row, 2)
            given[(x, y)] = (v, row)
        values = []
        for x in ground:
            out = []
            for y in ground:
                if x == y:
                    out.append(index.zero)
                elif (x, y) in given:
                    out.append(given[(x, y)][0])
                elif (y, x) in given:
                    out.append(given[(y, x)][0])
                else:
                    self.fail(f"metric {name} has no value for ({ground.label(x)}, {ground.label(y)})", line, 1)
            values.append(tuple(out))
        self.ws.metrics[name] = GenMetric(ground, index, tuple(values), name=name)

    def _relation_list(self, line: _Line, ground: GroundSet) -> list[Relation]:
        out = []
        for row in self.body(line):
            for k in range(len(row.tokens)):
                r = self.ref("relation", row, k)
                if r.ground != ground:
                    self.fail(f"relation {row.tokens[k][0]} lives over another ground set", row, k)
                out.append(r)
        return out

    def parse_structure(self, line: _Line):
        name = self.new_name("structure", line)
        ground = self._over(line)
        generated = len(line.tokens) > 4 and line.tokens[4][0] == "generated"
        if len(line.tokens) > 4 and not generated:
            self.fail("expected 'generated' or end of line", line, 4)
        members = self._relation_list(line, ground)
        if generated:
            self.ws.structures[name] = generate(ground, members)
            return
        violation = check_family(ground, members)
        if violation is not None:
            raise StructureError(violation)
        self.ws.structures[name] = CoarseStructure.from_members(ground, members)

    def parse_family(self, line: _Line):
        name = self.new_name("family", line)
        ground = self._over(line)
        self.ws.families[name] = self._relation_list(line, ground)

    def parse_uniform(self, line: _Line):
        name = self.new_name("uniform", line)
        ground = self._over(line)
        self.ws.uniforms[name] = UniformBase(ground, tuple(self._relation_list(line, ground)))

    def parse_map(self, line: _Line):
        name = self.new_name("map", line)
        self.expect(line, 2, "from")
        src = self.ref("ground", line, 3)
        self.expect(line, 4, "to")
        dst = self.ref("ground", line, 5)
        rows = self.body(line)
        if len(rows) != 1 or len(rows[0].tokens) != src.n:
            self.fail(f"map body must be one line with {src.n} values", rows[0] if rows else line, 0)
        table = tuple(self.point(dst, rows[0], k) for k in range(src.n))
        self.ws.maps[name] = SpaceMap(src, dst, table)


def loads(text: str, source: str = "<input>", into: Workspace | None = None) -> Workspace:
    ws = into if into is not None else Workspace(source)
    ws.source = source
    return _Parser(text, ws).run()


def load_paths(paths: Iterable[str]) -> Workspace:
    ws = Workspace()
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            loads(fh.read(), source=path, into=ws)
    return ws


# serialization


def dump_ground(g: GroundSet) -> str:
    labels = "" if g.labels is None else " " + " ".join(g.labels)
    return f"ground {g.name} {g.n}{labels}\n"


def dump_relation(name: str, r: Relation) -> str:
    g = r.ground
    body = "".join(f"{g.label(x)} {g.label(y)}\n" for x, y in sorted(r))
    return f"relation {name} over {g.name}\n{body}end\n"


def _poset_names(p: Poset) -> tuple[str, ...]:
    names = tuple(p.label(a) for a in range(p.m))
    return names if len(set(names)) == len(names) else tuple(str(a) for a in range(p.m))


def dump_poset(p: Poset) -> str:
    """Covering pairs only; relation-valued elements are written by position."""
    names = _poset_names(p)
    lines = [f"poset {p.name}", f"elems {p.m} " + " ".join(names)]
    for a in range(p.m):
        for b in range(p.m):
            if p.lt(a, b) and not any(p.lt(a, c) and p.lt(c, b) for c in range(p.m)):
                lines.append(f"{names[a]} <= {names[b]}")
    return "\n".join(lines) + "\nend\n"


def dump_metric(d: GenMetric) -> str:
    g, names = d.ground, _poset_names(d.index)
    lines = [f"metric {d.name} over {g.name} index {d.index.name}"]
    for x in g:
        for y in range(x + 1, g.n):
            v = d(x, y)
            lines.append(f"{g.label(x)} {g.label(y)} {'inf' if v is INF else names[v]}")
    return "\n".join(lines) + "\nend\n"


def dump_structure(name: str, s: CoarseStructure) -> str:
    """The structure is written as the structure generated by its largest member."""
    top = f"{name}_top"
    return dump_relation(top, s.top) + f"structure {name} over {s.ground.name} generated\n{top}\nend\n"


def dump_family(name: str, family: list[Relation], kind: str = "family") -> str:
    if not family:
        raise CoarseMetricError("cannot write an empty family")
    g = family[0].ground
    refs = [f"{name}_{i}" for i in range(len(family))]
    rels = "".join(dump_relation(r, b) for r, b in zip(refs, family))
    return rels + f"{kind} {name} over {g.name}\n" + " ".join(refs) + "\nend\n"


def dump_map(name: str, f: SpaceMap) -> str:
    vals = " ".join(f.target.label(f(x)) for x in f.source)
    return f"map {name} from {f.source.name} to {f.target.name}\n{vals}\nend\n"


def dump_metric_bundle(d: GenMetric) -> str:
    """Ground, index and metric blocks, enough to reload the metric alone."""
    return dump_ground(d.ground) + dump_poset(d.index) + dump_metric(d)
