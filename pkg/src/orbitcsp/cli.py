"""Text formats and the command-line front end.

Template files start with a ``base:`` header and one ``rel NAME/ARITY:``
line per relation; the type literal syntax depends on the base.  Instance
files hold a ``vars`` line followed by ``NAME(x,y)`` constraints.  Reports
are line-oriented ``key: value`` blocks with deterministic, byte-identical
output; exit code 0 means completed, 1 a negative outcome (UNSAT, an
NP-complete classification, an empty consistency state, a failed search),
and 2 an input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Callable, Optional, Sequence, Union

from . import homog, polyengine, temporal
from .consistency import EMPTY_DERIVED, establish_kl
from .errors import ArityError, OrbitCspError, ParseError
from .homog import (
    GRAPH,
    TOURNAMENT,
    HomogPatterns,
    HomogTemplate,
    Label,
    LabeledType,
    Shape,
    TypeSetRelation,
    VerdictKind,
    kfree,
)
from .relstruct import Instance, make_instance
from .temporal import (
    TemporalOp,
    TemporalPatterns,
    TemporalTemplate,
    WeakOrderType,
    Z_VALUE,
    temporal_relation,
)

Template = Union[TemporalTemplate, HomogTemplate]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_REL_LINE = re.compile(r"rel\s+([A-Za-z_][A-Za-z0-9_]*)/(\d+)\s*:\s*(.*)")
_CONSTRAINT = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\(\s*([^)]*)\)\s*")
_EDGE_ITEM = re.compile(r"E\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append((number, line))
    return out


def _parse_position(token: str, arity: int, line: int, column: int) -> int:
    if not token.isdigit():
        raise ParseError(f"expected a position number, got {token!r}", line, column)
    value = int(token)
    if not 1 <= value <= arity:
        raise ParseError(f"position {value} outside 1..{arity}", line, column)
    return value - 1


def _parse_weak_order(literal: str, arity: int, line: int, column: int) -> WeakOrderType:
    ranks = [-1] * arity
    seen = 0
    for level, group in enumerate(literal.split("<")):
        for token in group.split("="):
            position = _parse_position(token.strip(), arity, line, column)
            if ranks[position] != -1:
                raise ParseError(f"position {position + 1} listed twice", line, column)
            ranks[position] = level
            seen += 1
    if seen != arity:
        raise ParseError(
            f"type lists {seen} positions but the relation has arity {arity}",
            line,
            column,
        )
    return WeakOrderType(tuple(ranks))


class _PairReader:
    """Shared machinery for the homogeneous type literals: '=' items merge
    positions, the remaining items label block pairs."""

    def __init__(self, arity: int, line: int, column: int):
        self.arity = arity
        self.line = line
        self.column = column
        self.parent = list(range(arity))
        self.pair_labels: dict[tuple[int, int], Label] = {}

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def merge(self, item: str) -> None:
        positions = [
            _parse_position(tok.strip(), self.arity, self.line, self.column)
            for tok in item.split("=")
        ]
        for p in positions[1:]:
            ra, rb = self.find(positions[0]), self.find(p)
            if ra != rb:
                self.parent[max(ra, rb)] = min(ra, rb)

    def put(self, a: int, b: int, label: Label) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            raise ParseError(
                "pair label within a merged block", self.line, self.column
            )
        key = (min(ra, rb), max(ra, rb))
        oriented = label if ra == key[0] else label.flipped
        if self.pair_labels.get(key, oriented) is not oriented:
            raise ParseError(
                f"conflicting labels between {a + 1} and {b + 1}",
                self.line,
                self.column,
            )
        self.pair_labels[key] = oriented

    def build(self, default: Optional[Label]) -> LabeledType:
        def label_of(i: int, j: int) -> Label:
            ri, rj = self.find(i), self.find(j)
            if ri == rj:
                return Label.EQ
            key = (min(ri, rj), max(ri, rj))
            stored = self.pair_labels.get(key, default)
            if stored is None:
                raise ParseError(
                    f"missing arc between {i + 1} and {j + 1}",
                    self.line,
                    self.column,
                )
            return stored if ri == key[0] else stored.flipped

        return LabeledType.from_pair_labels(self.arity, label_of)


def _split_items(literal: str) -> list[str]:
    items, depth, start = [], 0, 0
    for i, ch in enumerate(literal):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            items.append(literal[start:i].strip())
            start = i + 1
    items.append(literal[start:].strip())
    return items


def _parse_homog_type(
    literal: str, arity: int, base: homog.Base, line: int, column: int
) -> LabeledType:
    reader = _PairReader(arity, line, column)
    items = [] if literal == "-" else _split_items(literal)
    merges = [item for item in items if "=" in item]
    rest = [item for item in items if "=" not in item]
    for item in merges:
        reader.merge(item)
    for item in rest:
        if base.oriented:
            if "->" not in item:
                raise ParseError(f"expected an arc, got {item!r}", line, column)
            left, _, right = item.partition("->")
            a = _parse_position(left.strip(), arity, line, column)
            b = _parse_position(right.strip(), arity, line, column)
            reader.put(a, b, Label.FWD)
        else:
            match = _EDGE_ITEM.fullmatch(item)
            if not match:
                raise ParseError(f"expected an edge, got {item!r}", line, column)
            a = _parse_position(match.group(1), arity, line, column)
            b = _parse_position(match.group(2), arity, line, column)
            reader.put(a, b, Label.E)
    return reader.build(None if base.oriented else Label.N)


def _parse_base(value: str, line: int) -> Union[str, homog.Base]:
    if value == "temporal":
        return "temporal"
    if value == "tournament":
        return TOURNAMENT
    if value == "graph":
        return GRAPH
    match = re.fullmatch(r"kfree\((\d+)\)", value)
    if match and int(match.group(1)) >= 3:
        return kfree(int(match.group(1)))
    raise ParseError(f"unknown base {value!r}", line, 7)


def parse_template(text: str) -> Template:
    """Parse a template file into its temporal or homogeneous form."""
    lines = _content_lines(text)
    if not lines or not lines[0][1].startswith("base:"):
        raise ParseError("expected a 'base:' header", lines[0][0] if lines else 1, 1)
    header_line, header = lines[0]
    base = _parse_base(header[5:].strip(), header_line)
    temporal_rels: dict[str, temporal.TemporalRelation] = {}
    homog_rels: dict[str, TypeSetRelation] = {}
    for line_no, line in lines[1:]:
        match = _REL_LINE.fullmatch(line)
        if not match:
            raise ParseError("expected 'rel NAME/ARITY: types'", line_no, 1)
        name, arity, body = match.group(1), int(match.group(2)), match.group(3)
        if name in temporal_rels or name in homog_rels:
            raise ParseError(f"relation {name} declared twice", line_no, 5)
        if arity < 1:
            raise ParseError("relations need arity >= 1", line_no, 5)
        literals = [lit.strip() for lit in body.split(";")]
        if not body.strip() or any(not lit for lit in literals):
            raise ParseError("empty type literal", line_no, len(line))
        column = line.index(":") + 2
        try:
            if base == "temporal":
                types = [
                    _parse_weak_order(lit, arity, line_no, column)
                    for lit in literals
                ]
                temporal_rels[name] = temporal_relation(arity, types)
            else:
                homog_rels[name] = homog.type_set_relation(
                    arity,
                    base,
                    [
                        _parse_homog_type(lit, arity, base, line_no, column)
                        for lit in literals
                    ],
                )
        except ParseError:
            raise
        except OrbitCspError as exc:
            raise ParseError(str(exc), line_no, column) from exc
    if base == "temporal":
        return TemporalTemplate(temporal_rels)
    return HomogTemplate(base, homog_rels)


def parse_instance(text: str, template: Template) -> Instance:
    """Parse an instance file, checking names and arities against the template."""
    lines = _content_lines(text)
    if not lines or not lines[0][1].startswith("vars"):
        raise ParseError("expected a 'vars' header", lines[0][0] if lines else 1, 1)
    header_line, header = lines[0]
    variables = tuple(header[4:].split())
    if not variables:
        raise ParseError("no variables declared", header_line, 5)
    for v in variables:
        if not _NAME.fullmatch(v):
            raise ParseError(f"bad variable name {v!r}", header_line, 5)
    if len(set(variables)) != len(variables):
        raise ParseError("duplicate variable", header_line, 5)
    constraints = []
    for line_no, line in lines[1:]:
        match = _CONSTRAINT.fullmatch(line)
        if not match:
            raise ParseError("expected 'NAME(x,y,...)'", line_no, 1)
        name = match.group(1)
        scope = tuple(tok.strip() for tok in match.group(2).split(","))
        rel = template.relations.get(name)
        if rel is None:
            raise ParseError(f"unknown relation {name}", line_no, 1)
        if rel.arity != len(scope):
            raise ArityError(
                f"line {line_no}: {name} has arity {rel.arity}, got {len(scope)}"
            )
        for v in scope:
            if v not in variables:
                raise ParseError(f"unknown variable {v!r}", line_no, 1)
        constraints.append((name, scope))
    return make_instance(variables, constraints)


def _format_homog_type(t: LabeledType, names: Optional[Sequence[str]] = None) -> str:
    if names is None:
        names = [str(i + 1) for i in range(t.arity)]
    items = []
    for block in t.partition:
        if len(block) > 1:
            items.append("=".join(names[p] for p in block))
    reps = [block[0] for block in t.partition]
    for bi in range(len(reps)):
        for bj in range(bi + 1, len(reps)):
            label = t.labels[homog._pair_index(len(reps), bi, bj)]
            if label is Label.FWD:
                items.append(f"{names[reps[bi]]}->{names[reps[bj]]}")
            elif label is Label.BWD:
                items.append(f"{names[reps[bj]]}->{names[reps[bi]]}")
            elif label is Label.E:
                items.append(f"E({names[reps[bi]]},{names[reps[bj]]})")
    return ", ".join(items) if items else "-"


def format_template(template: Template) -> str:
    """Render a template canonically: sorted names, sorted type literals."""
    if isinstance(template, TemporalTemplate):
        out = ["base: temporal"]
        for name in sorted(template.relations):
            rel = template.relations[name]
            body = "; ".join(str(t) for t in rel.sorted_types())
            out.append(f"rel {name}/{rel.arity}: {body}")
    else:
        out = [f"base: {template.base}"]
        for name in sorted(template.relations):
            rel = template.relations[name]
            body = "; ".join(_format_homog_type(t) for t in rel.sorted_types())
            out.append(f"rel {name}/{rel.arity}: {body}")
    return "\n".join(out) + "\n"


def format_instance(instance: Instance) -> str:
    out = ["vars " + " ".join(instance.variables)]
    for name, scope in instance.constraints:
        out.append(f"{name}({','.join(scope)})")
    return "\n".join(out) + "\n"


def _format_levels(levels: Sequence[Sequence[str]]) -> str:
    return "".join("[" + ",".join(level) + "]" for level in levels)


def _format_afin_tuple(values: Sequence[int]) -> str:
    return "(" + ",".join("Z" if v == Z_VALUE else "P" for v in values) + ")"


def _behavior_lines(behavior: homog.PairBehavior) -> list[str]:
    return [
        f"behavior {','.join(str(l) for l in cell)}: {value}"
        for cell, value in behavior.cells()
    ]


def _require_temporal(template: Template, command: str) -> TemporalTemplate:
    if not isinstance(template, TemporalTemplate):
        raise ParseError(f"{command} applies to temporal templates")
    return template


def _cmd_classify(template: Template, args: argparse.Namespace) -> tuple[list[str], int]:
    if isinstance(template, TemporalTemplate):
        verdict = temporal.classify_temporal(template)
        if verdict.polynomial:
            return ["verdict: P", f"mode: {verdict.mode.name}"], 0
        lines = ["verdict: NP_COMPLETE"]
        for mode, name, counter in verdict.counterexamples:
            lines.append(
                f"counterexample {mode.name} {name}: "
                f"joint={counter.joint} image={counter.image}"
            )
        return lines, 1
    verdict = homog.classify_reduct(template)
    lines = [f"verdict: {verdict.kind.value}"]
    if verdict.kind is VerdictKind.EQUALITY_P:
        lines.append("width: UNDETERMINED")
    if verdict.witness is not None:
        lines.append(f"shape: {verdict.shape.name}")
        lines.extend(_behavior_lines(verdict.witness))
    failed = verdict.kind in (VerdictKind.NP_COMPLETE, VerdictKind.EQUALITY_NPC)
    return lines, 1 if failed else 0


def _temporal_solution(
    template: TemporalTemplate, instance: Instance, mode_flag: Optional[str]
) -> tuple[str, Optional[temporal.Levels]]:
    if mode_flag:
        mode = TemporalOp(mode_flag)
        return mode.name, temporal.solve_master(instance, template, mode)
    verdict = temporal.classify_temporal(template)
    if verdict.polynomial:
        mode = verdict.mode
        return mode.name, temporal.solve_master(instance, template, mode)
    return "ORACLE", temporal.brute_oracle(instance, template)


def _cmd_solve(
    template: Template, instance: Instance, args: argparse.Namespace
) -> tuple[list[str], int]:
    if isinstance(template, TemporalTemplate):
        mode_name, levels = _temporal_solution(template, instance, args.mode)
        lines = [f"mode: {mode_name}"]
        if levels is None:
            lines.append("result: UNSAT")
        else:
            lines.append("result: SAT")
            lines.append(f"levels: {_format_levels(levels)}")
        if args.oracle:
            reference = temporal.brute_oracle(instance, template)
            agree = (reference is None) == (levels is None)
            lines.append(f"oracle: {'AGREE' if agree else 'DISAGREE'}")
            if not agree:
                return lines, 2
        return lines, 0 if levels is not None else 1
    if args.mode:
        raise ParseError("--mode applies to temporal templates")
    solution = homog.solve_instance_brute(instance, template)
    if solution is None:
        lines = ["result: UNSAT"]
        if args.oracle:
            lines.append("oracle: AGREE")
        return lines, 1
    lines = [
        "result: SAT",
        f"labeling: {_format_homog_type(solution, instance.variables)}",
    ]
    if args.oracle:
        lines.append("oracle: AGREE")
    return lines, 0


def _cmd_freesets(
    template: Template, instance: Instance, args: argparse.Namespace
) -> tuple[list[str], int]:
    template = _require_temporal(template, "freesets")
    lines = []
    for variable in instance.variables:
        found = temporal.free_set_containing(instance, template, variable)
        if found is None:
            lines.append(f"free {variable}: NONE")
        else:
            ordered = [v for v in instance.variables if v in found]
            lines.append(f"free {variable}: {{{','.join(ordered)}}}")
    return lines, 0


def _cmd_afin(template: Template, args: argparse.Namespace) -> tuple[list[str], int]:
    template = _require_temporal(template, "afin")
    structure = temporal.build_afin(template)
    lines = []
    for name, rel in structure.relations.items():
        patterns = sorted(rel.tuples, reverse=True)
        lines.append(
            f"{name}: " + " ".join(_format_afin_tuple(p) for p in patterns)
        )
    return lines, 0


_IDENTITY_SYSTEMS: dict[str, tuple[polyengine.IdentitySystem, Optional[int]]] = {
    "idempotent": (polyengine.IDEMPOTENT, None),
    "siggers": (polyengine.SIGGERS, 6),
    "majority": (polyengine.MAJORITY, 3),
    "minority": (polyengine.MINORITY, 3),
    "semilattice": (polyengine.SEMILATTICE, 2),
}

_SHAPES = {shape.value: shape for shape in Shape}


def _cmd_polysearch(
    template: Template, args: argparse.Namespace
) -> tuple[list[str], int]:
    if isinstance(template, TemporalTemplate):
        if args.shape:
            raise ParseError("--shape applies to tournament and graph templates")
        if not args.identity:
            raise ParseError("polysearch needs --identity for temporal templates")
        if args.identity in _IDENTITY_SYSTEMS:
            system, default_arity = _IDENTITY_SYSTEMS[args.identity]
        elif args.identity == "cyclic":
            if not args.arity:
                raise ParseError("cyclic needs --arity")
            system, default_arity = polyengine.cyclic(args.arity), args.arity
        elif args.identity == "wnu":
            if not args.arity:
                raise ParseError("wnu needs --arity")
            system, default_arity = polyengine.wnu(args.arity), args.arity
        else:
            raise ParseError(f"unknown identity {args.identity!r}")
        arity = args.arity or default_arity
        if arity is None:
            raise ParseError(f"{args.identity} needs --arity")
        structure = temporal.build_afin(template)
        table = polyengine.find_polymorphism(structure, system, arity)
        if table is None:
            return ["op: NONE"], 1
        values = ",".join(str(v) for v in table.values)
        return ["op: FOUND", f"arity: {table.arity}", f"table: {values}"], 0
    if args.identity:
        raise ParseError("--identity applies to temporal templates")
    if not args.shape:
        raise ParseError("polysearch needs --shape for tournament and graph templates")
    behavior = homog.search_behavior(template, _SHAPES[args.shape])
    if behavior is None:
        return ["op: NONE"], 1
    return ["op: FOUND"] + _behavior_lines(behavior), 0


def _cmd_consistency(
    template: Template, instance: Instance, args: argparse.Namespace
) -> tuple[list[str], int]:
    match = re.fullmatch(r"(\d+),(\d+)", args.kl)
    if not match:
        raise ParseError("--kl expects K,L")
    k, l = int(match.group(1)), int(match.group(2))
    if isinstance(template, TemporalTemplate):
        space = TemporalPatterns(template)
    else:
        space = HomogPatterns(template)
    state = establish_kl(instance, space, k, l)
    lines = [f"kl: {k},{l}"]
    if state is EMPTY_DERIVED:
        lines.append("state: EMPTY_DERIVED")
        return lines, 1
    lines.append("state: CONSISTENT")
    lines.append(f"subsets: {len(state.allowed)}")
    return lines, 0


def _cmd_oracle(
    template: Template, instance: Instance, args: argparse.Namespace
) -> tuple[list[str], int]:
    if isinstance(template, TemporalTemplate):
        levels = temporal.brute_oracle(instance, template)
        if levels is None:
            return ["result: UNSAT"], 1
        return ["result: SAT", f"levels: {_format_levels(levels)}"], 0
    solution = homog.solve_instance_brute(instance, template)
    if solution is None:
        return ["result: UNSAT"], 1
    return [
        "result: SAT",
        f"labeling: {_format_homog_type(solution, instance.variables)}",
    ], 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitcsp", add_help=True)
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, instance: bool) -> argparse.ArgumentParser:
        sub = commands.add_parser(name)
        sub.add_argument("template")
        if instance:
            sub.add_argument("instance")
        return sub

    add("classify", instance=False)
    solve = add("solve", instance=True)
    solve.add_argument(
        "--mode", choices=["pp", "ll", "dual_pp", "dual_ll"]
    )
    solve.add_argument("--oracle", action="store_true")
    add("freesets", instance=True)
    add("afin", instance=False)
    poly = add("polysearch", instance=False)
    poly.add_argument("--shape", choices=sorted(_SHAPES))
    poly.add_argument(
        "--identity",
        choices=sorted(_IDENTITY_SYSTEMS) + ["cyclic", "wnu"],
    )
    poly.add_argument("--arity", type=int)
    consistency = add("consistency", instance=True)
    consistency.add_argument("--kl", default="2,3")
    add("oracle", instance=True)
    return parser


def run(argv: Sequence[str]) -> tuple[str, int]:
    """Execute one command; returns the report text and the exit code."""
    try:
        args = _build_parser().parse_args(list(argv))
    except SystemExit as exc:
        return "", int(exc.code or 0)
    try:
        with open(args.template, encoding="utf-8") as handle:
            template = parse_template(handle.read())
        instance = None
        if hasattr(args, "instance"):
            with open(args.instance, encoding="utf-8") as handle:
                instance = parse_instance(handle.read(), template)
        if args.command == "classify":
            lines, code = _cmd_classify(template, args)
        elif args.command == "solve":
            lines, code = _cmd_solve(template, instance, args)
        elif args.command == "freesets":
            lines, code = _cmd_freesets(template, instance, args)
        elif args.command == "afin":
            lines, code = _cmd_afin(template, args)
        elif args.command == "polysearch":
            lines, code = _cmd_polysearch(template, args)
        elif args.command == "consistency":
            lines, code = _cmd_consistency(template, instance, args)
        else:
            lines, code = _cmd_oracle(template, instance, args)
    except OrbitCspError as exc:
        return f"error: {exc}\n", 2
    except OSError as exc:
        return f"error: {exc}\n", 2
    return "\n".join(lines) + "\n", code


def main() -> None:
    report, code = run(sys.argv[1:])
    if report:
        sys.stdout.write(report)
    sys.exit(code)
