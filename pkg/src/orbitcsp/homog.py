"""Reducts of the generic tournament and the random graph.

Relations over these structures are finite unions of complete types: a type
of arity ``k`` records which positions coincide and an edge label for every
pair of distinct blocks.  Because the base structures are homogeneous in a
binary language, an operation is summarised exactly by its *behavior* -- a
finite table mapping tuples of pair labels to a pair label -- and a relation
is preserved by an operation iff its type set is closed under the pointwise
behavior action.  That reduces the dichotomy questions to finite searches
over behavior tables, which this module implements together with a
brute-force instance oracle and a pattern-space adapter for the local
consistency engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum, IntEnum
from functools import cached_property, lru_cache
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    ArityMismatch,
    BudgetExceeded,
    DomainMismatch,
    MalformedPattern,
    ParameterError,
    ShapeUnsupported,
    SignatureMismatch,
    UnsupportedBase,
)
from .relstruct import Instance

TYPE_ARITY_LIMIT = 6
BRUTE_VARIABLE_LIMIT = 6
RECHECK_CELL_LIMIT = 20


class Label(IntEnum):
    """Pair labels: equality plus the two edge labels of either base."""

    EQ = 0
    FWD = 1
    BWD = 2
    E = 3
    N = 4

    def __str__(self) -> str:
        return self.name

    @property
    def flipped(self) -> "Label":
        """Reverse arc orientation; equality and graph labels are symmetric."""
        return _FLIP[self]


_FLIP = {
    Label.EQ: Label.EQ,
    Label.FWD: Label.BWD,
    Label.BWD: Label.FWD,
    Label.E: Label.E,
    Label.N: Label.N,
}


@dataclass(frozen=True)
class Base:
    """One of the three base structures; ``forbidden`` is the clique bound."""

    kind: str
    forbidden: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in ("tournament", "graph", "kfree"):
            raise ParameterError(f"unknown base kind {self.kind!r}")
        if self.kind == "kfree":
            if self.forbidden is None or self.forbidden < 3:
                raise ParameterError("kfree base needs a clique bound >= 3")
        elif self.forbidden is not None:
            raise ParameterError(f"{self.kind} base takes no clique bound")

    @property
    def labels(self) -> tuple[Label, Label]:
        if self.kind == "tournament":
            return (Label.FWD, Label.BWD)
        return (Label.E, Label.N)

    @property
    def oriented(self) -> bool:
        return self.kind == "tournament"

    def __str__(self) -> str:
        if self.kind == "kfree":
            return f"kfree({self.forbidden})"
        return self.kind


TOURNAMENT = Base("tournament")
GRAPH = Base("graph")


def kfree(n: int) -> Base:
    """The universal homogeneous K_n-free graph."""
    return Base("kfree", n)


def _pair_index(k: int, i: int, j: int) -> int:
    """Index of the pair (i, j), i < j, in lexicographic pair order."""
    return i * (2 * k - i - 1) // 2 + (j - i - 1)


def _labels_have_clique(m: int, labels: Sequence[Label], size: int) -> bool:
    """Whether ``size`` blocks out of ``m`` are pairwise labeled E."""
    if size > m:
        return False
    for combo in itertools.combinations(range(m), size):
        if all(
            labels[_pair_index(m, a, b)] is Label.E
            for a, b in itertools.combinations(combo, 2)
        ):
            return True
    return False


@dataclass(frozen=True, order=True)
class LabeledType:
    """A complete type: a partition of positions plus labels on block pairs.

    Blocks are ordered by least position and ascending internally; ``labels``
    holds one entry per block pair (b1 < b2) in lexicographic order.  An
    oriented label is stated relative to the ascending order of the block
    representatives, i.e. FWD at (b1, b2) is an arc from b1's least position
    toward b2's least position.
    """

    arity: int
    partition: tuple[tuple[int, ...], ...]
    labels: tuple[Label, ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise MalformedPattern("types need arity >= 1")
        seen = sorted(p for block in self.partition for p in block)
        if seen != list(range(self.arity)):
            raise MalformedPattern("partition must cover each position once")
        for block in self.partition:
            if list(block) != sorted(block):
                raise MalformedPattern("block members must ascend")
        firsts = [block[0] for block in self.partition]
        if firsts != sorted(firsts):
            raise MalformedPattern("blocks must be ordered by least position")
        m = len(self.partition)
        if len(self.labels) != m * (m - 1) // 2:
            raise MalformedPattern("need one label per block pair")
        if any(lbl is Label.EQ for lbl in self.labels):
            raise MalformedPattern("distinct blocks cannot be labeled EQ")

    @property
    def num_blocks(self) -> int:
        return len(self.partition)

    @property
    def is_injective(self) -> bool:
        return len(self.partition) == self.arity

    @classmethod
    def all_equal(cls, arity: int) -> "LabeledType":
        return cls(arity, (tuple(range(arity)),), ())

    @classmethod
    def from_pair_labels(
        cls, arity: int, label_of: Callable[[int, int], Label]
    ) -> "LabeledType":
        """Build a type from a pairwise labeling; EQ entries merge positions.

        Raises MalformedPattern when the EQ pattern is not an equivalence or
        the labels disagree across merged positions.
        """
        if arity < 1:
            raise MalformedPattern("types need arity >= 1")
        parent = list(range(arity))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        given = {}
        for i, j in itertools.combinations(range(arity), 2):
            given[(i, j)] = label_of(i, j)
            if given[(i, j)] is Label.EQ:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
        blocks: dict[int, list[int]] = {}
        for p in range(arity):
            blocks.setdefault(find(p), []).append(p)
        partition = tuple(tuple(blocks[r]) for r in sorted(blocks))
        reps = [block[0] for block in partition]
        block_of = {p: b for b, block in enumerate(partition) for p in block}
        labels = []
        for b1, b2 in itertools.combinations(range(len(partition)), 2):
            labels.append(given[(reps[b1], reps[b2])])
        for (i, j), lbl in given.items():
            bi, bj = block_of[i], block_of[j]
            if bi == bj:
                if lbl is not Label.EQ:
                    raise MalformedPattern("equalities are not transitive")
                continue
            if lbl is Label.EQ:
                raise MalformedPattern("equalities are not transitive")
            stored = labels[_pair_index(len(partition), min(bi, bj), max(bi, bj))]
            expected = stored if bi < bj else stored.flipped
            if lbl is not expected:
                raise MalformedPattern("labels disagree across merged positions")
        return cls(arity, partition, tuple(labels))

    @cached_property
    def _block_index(self) -> tuple[int, ...]:
        out = [0] * self.arity
        for b, block in enumerate(self.partition):
            for p in block:
                out[p] = b
        return tuple(out)

    @cached_property
    def fingerprint(self) -> tuple[Label, ...]:
        """label(i, j) for every position pair i < j, in lexicographic order."""
        m = len(self.partition)
        block_of = self._block_index
        out = []
        for i, j in itertools.combinations(range(self.arity), 2):
            bi, bj = block_of[i], block_of[j]
            if bi == bj:
                out.append(Label.EQ)
            else:
                stored = self.labels[_pair_index(m, min(bi, bj), max(bi, bj))]
                out.append(stored if bi < bj else stored.flipped)
        return tuple(out)

    def label(self, i: int, j: int) -> Label:
        """The label of the ordered position pair (i, j); EQ when merged."""
        if not (0 <= i < self.arity and 0 <= j < self.arity):
            raise ParameterError("position out of range")
        if i == j:
            return Label.EQ
        if i < j:
            return self.fingerprint[_pair_index(self.arity, i, j)]
        return self.fingerprint[_pair_index(self.arity, j, i)].flipped

    def project(self, positions: Sequence[int]) -> "LabeledType":
        """The type of the reordered tuple; repeated positions merge."""
        positions = tuple(positions)
        return LabeledType.from_pair_labels(
            len(positions), lambda a, b: self.label(positions[a], positions[b])
        )

    def permute(self, perm: Sequence[int]) -> "LabeledType":
        if sorted(perm) != list(range(self.arity)):
            raise ParameterError("not a permutation of the positions")
        return self.project(perm)

    def has_clique(self, size: int) -> bool:
        """Whether ``size`` blocks are pairwise labeled E."""
        return _labels_have_clique(len(self.partition), self.labels, size)


@dataclass(frozen=True, eq=False)
class TypeSetRelation:
    """A relation given as the set of complete types it contains."""

    arity: int
    base: Base
    types: frozenset[LabeledType]

    def __post_init__(self) -> None:
        allowed = set(self.base.labels)
        for t in self.types:
            if t.arity != self.arity:
                raise ArityMismatch("relation types must share the arity")
            if not set(t.labels) <= allowed:
                raise DomainMismatch("type labels do not match the base")
            if self.base.kind == "kfree" and t.has_clique(self.base.forbidden):
                raise MalformedPattern("type contains a forbidden clique")

    def sorted_types(self) -> list[LabeledType]:
        return sorted(self.types)

    @cached_property
    def fingerprints(self) -> frozenset[tuple[Label, ...]]:
        return frozenset(t.fingerprint for t in self.types)


def type_set_relation(
    arity: int, base: Base, types: Iterable[LabeledType]
) -> TypeSetRelation:
    return TypeSetRelation(arity, base, frozenset(types))


@dataclass(frozen=True, eq=False)
class HomogTemplate:
    """A named family of relations over one base structure."""

    base: Base
    relations: Mapping[str, TypeSetRelation]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "relations", MappingProxyType(dict(self.relations))
        )
        for name, rel in self.relations.items():
            if rel.base != self.base:
                raise DomainMismatch(f"relation {name} uses a different base")


def homog_template(
    base: Base, relations: Mapping[str, TypeSetRelation]
) -> HomogTemplate:
    return HomogTemplate(base, relations)


def _set_partitions(k: int) -> Iterable[tuple[tuple[int, ...], ...]]:
    """All partitions of range(k), blocks ordered by least member."""
    assignment = [0] * k

    def go(i: int, used: int) -> Iterable[tuple[tuple[int, ...], ...]]:
        if i == k:
            blocks: list[list[int]] = [[] for _ in range(used)]
            for p, b in enumerate(assignment):
                blocks[b].append(p)
            yield tuple(tuple(b) for b in blocks)
            return
        for b in range(used + 1):
            assignment[i] = b
            yield from go(i + 1, used + (1 if b == used else 0))

    yield from go(0, 0)


def enumerate_types(
    k: int, base: Base, injective_only: bool = False
) -> list[LabeledType]:
    """All complete types of arity ``k`` over the base, in a fixed order."""
    if k < 1:
        raise ParameterError("arity must be at least 1")
    if k > TYPE_ARITY_LIMIT:
        raise BudgetExceeded(f"type enumeration capped at arity {TYPE_ARITY_LIMIT}")
    return list(_enumerate_types_cached(k, base, injective_only))


@lru_cache(maxsize=None)
def _enumerate_types_cached(
    k: int, base: Base, injective_only: bool
) -> tuple[LabeledType, ...]:
    out = []
    partitions: Iterable[tuple[tuple[int, ...], ...]]
    if injective_only:
        partitions = [tuple((p,) for p in range(k))]
    else:
        partitions = _set_partitions(k)
    for partition in partitions:
        m = len(partition)
        for labels in itertools.product(base.labels, repeat=m * (m - 1) // 2):
            if base.kind == "kfree" and _labels_have_clique(
                m, labels, base.forbidden
            ):
                continue
            out.append(LabeledType(k, partition, labels))
    return tuple(out)


@dataclass(frozen=True)
class PairBehavior:
    """A finite operation on pair labels.

    ``symbols`` lists the alphabet with EQ first; ``values`` is the table in
    row-major order (last argument varies fastest).  The table maps the
    all-EQ input to EQ and nothing else to EQ, and over the tournament
    alphabet it commutes with reversing all arcs.
    """

    arity: int
    symbols: tuple[Label, ...]
    values: tuple[Label, ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ParameterError("behaviors need arity >= 1")
        if len(set(self.symbols)) != len(self.symbols) or self.symbols[0] is not Label.EQ:
            raise MalformedPattern("symbols must be distinct and start with EQ")
        if len(self.values) != len(self.symbols) ** self.arity:
            raise MalformedPattern("behavior table has the wrong size")
        if any(v not in self.symbols for v in self.values):
            raise MalformedPattern("behavior values must come from the symbols")
        if self.values[0] is not Label.EQ:
            raise MalformedPattern("the all-EQ input must map to EQ")
        if any(v is Label.EQ for v in self.values[1:]):
            raise MalformedPattern("only the all-EQ input may map to EQ")
        if Label.FWD in self.symbols:
            for cell, value in self.cells():
                flipped = tuple(l.flipped for l in cell)
                if self.values[self.index(flipped)] is not value.flipped:
                    raise MalformedPattern("behavior is not flip-equivariant")

    @cached_property
    def _symbol_index(self) -> dict[Label, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    def index(self, labels: Sequence[Label]) -> int:
        idx = 0
        for lbl in labels:
            idx = idx * len(self.symbols) + self._symbol_index[lbl]
        return idx

    def __call__(self, *labels: Label) -> Label:
        if len(labels) != self.arity:
            raise ArityMismatch("wrong number of arguments")
        if any(l not in self._symbol_index for l in labels):
            raise DomainMismatch("label outside the behavior alphabet")
        return self.values[self.index(labels)]

    def cells(self) -> Iterable[tuple[tuple[Label, ...], Label]]:
        for i, cell in enumerate(itertools.product(self.symbols, repeat=self.arity)):
            yield cell, self.values[i]

    @classmethod
    def from_function(
        cls,
        arity: int,
        symbols: Sequence[Label],
        fn: Callable[..., Label],
    ) -> "PairBehavior":
        symbols = tuple(symbols)
        values = tuple(
            fn(*cell) for cell in itertools.product(symbols, repeat=arity)
        )
        return cls(arity, symbols, values)


def _g2(a: Label, b: Label) -> Label:
    return b if a is Label.EQ else a


# First projection on arcs; an equality in either argument defers to the
# other argument.  This is the binary operation every tournament reduct with
# a majority or minority behavior must also admit.
G2_BEHAVIOR = PairBehavior.from_function(2, (Label.EQ, Label.FWD, Label.BWD), _g2)


class Shape(Enum):
    """The injective actions worth searching for on a two-label alphabet."""

    TERNARY_MAJORITY = "majority"
    TERNARY_MINORITY = "minority"
    BINARY_SL_E = "sl_e"
    BINARY_SL_N = "sl_n"

    @property
    def arity(self) -> int:
        return 3 if self in (Shape.TERNARY_MAJORITY, Shape.TERNARY_MINORITY) else 2


def _shape_value(shape: Shape, cell: Sequence[Label]) -> Label:
    if shape is Shape.BINARY_SL_E:
        return Label.E if Label.E in cell else Label.N
    if shape is Shape.BINARY_SL_N:
        return Label.N if Label.N in cell else Label.E
    a, b, c = cell
    if shape is Shape.TERNARY_MAJORITY:
        return a if b == a or c == a else b
    if a == b:
        return c
    if a == c:
        return b
    return a


def behavior_image(
    behavior: PairBehavior, types: Sequence[LabeledType]
) -> LabeledType:
    """Apply a behavior to a tuple of types of equal arity.

    Positions merge in the image iff they are merged in every input; every
    surviving pair is labeled by the behavior applied to the input labels,
    reading EQ from inputs that merge the pair.
    """
    types = tuple(types)
    if len(types) != behavior.arity:
        raise ArityMismatch("behavior arity does not match the tuple length")
    if len({t.arity for t in types}) != 1:
        raise ArityMismatch("input types must share the arity")
    for t in types:
        if any(l not in behavior._symbol_index for l in t.labels):
            raise DomainMismatch("type labels outside the behavior alphabet")
    k = types[0].arity
    if all(t.is_injective for t in types):
        labels = tuple(
            behavior.values[behavior.index([t.label(i, j) for t in types])]
            for i, j in itertools.combinations(range(k), 2)
        )
        return LabeledType(k, tuple((p,) for p in range(k)), labels)

    def label_of(i: int, j: int) -> Label:
        vec = [t.label(i, j) for t in types]
        if all(l is Label.EQ for l in vec):
            return Label.EQ
        return behavior.values[behavior.index(vec)]

    return LabeledType.from_pair_labels(k, label_of)


def behavior_preserves(behavior: PairBehavior, rel: TypeSetRelation) -> bool:
    """Whether every tuple of relation types has its image in the relation."""
    if any(l not in behavior._symbol_index for l in rel.base.labels):
        raise DomainMismatch("relation base outside the behavior alphabet")
    for ts in itertools.product(rel.sorted_types(), repeat=behavior.arity):
        if behavior_image(behavior, ts) not in rel.types:
            return False
    return True


TemplateLike = Union[HomogTemplate, Mapping[str, TypeSetRelation], Sequence[TypeSetRelation]]


def _template_relations(template: TemplateLike) -> tuple[Base, list[TypeSetRelation]]:
    if isinstance(template, HomogTemplate):
        relations = [template.relations[n] for n in sorted(template.relations)]
        base = template.base
    elif isinstance(template, Mapping):
        relations = [template[n] for n in sorted(template)]
        if not relations:
            raise ParameterError("empty template")
        base = relations[0].base
    else:
        relations = list(template)
        if not relations:
            raise ParameterError("empty template")
        base = relations[0].base
    if any(rel.base != base for rel in relations):
        raise DomainMismatch("relations must share the base")
    return base, relations


@dataclass(frozen=True)
class _PreservationCheck:
    """One closure condition: a tuple of types whose image must stay inside.

    ``template_fp`` fixes the merged pairs to EQ; ``pair_cells`` lists the
    remaining fingerprint positions with the behavior cell feeding them.
    """

    template_fp: tuple[Optional[Label], ...]
    pair_cells: tuple[tuple[int, int], ...]
    fingerprints: frozenset[tuple[Label, ...]]

    def passes(self, table: Sequence[Optional[Label]]) -> bool:
        fp = list(self.template_fp)
        for pos, cell in self.pair_cells:
            fp[pos] = table[cell]
        return tuple(fp) in self.fingerprints


@dataclass
class _SearchSpace:
    symbols: tuple[Label, ...]
    table: list[Optional[Label]]
    flip_index: Optional[list[int]]
    free: list[int]
    checks: list[_PreservationCheck]


def _build_search_space(
    base: Base, relations: Sequence[TypeSetRelation], shape: Shape
) -> _SearchSpace:
    if base.oriented and shape in (Shape.BINARY_SL_E, Shape.BINARY_SL_N):
        raise ShapeUnsupported(
            "a semilattice on arcs would break flip-equivariance"
        )
    symbols = (Label.EQ,) + base.labels
    n = shape.arity
    cells = list(itertools.product(symbols, repeat=n))
    index_of = {cell: i for i, cell in enumerate(cells)}
    table: list[Optional[Label]] = [None] * len(cells)
    for i, cell in enumerate(cells):
        if all(l is Label.EQ for l in cell):
            table[i] = Label.EQ
        elif all(l is not Label.EQ for l in cell):
            table[i] = _shape_value(shape, cell)
    flip_index = None
    if base.oriented:
        flip_index = [
            index_of[tuple(l.flipped for l in cell)] for cell in cells
        ]
    free = [
        i
        for i in range(len(cells))
        if table[i] is None and (flip_index is None or i <= flip_index[i])
    ]

    sym_pos = {s: i for i, s in enumerate(symbols)}

    def cell_index(vec: Sequence[Label]) -> int:
        idx = 0
        for lbl in vec:
            idx = idx * len(symbols) + sym_pos[lbl]
        return idx

    checks = []
    for rel in relations:
        if not set(rel.base.labels) <= set(symbols):
            raise DomainMismatch("relation base outside the search alphabet")
        pairs = list(itertools.combinations(range(rel.arity), 2))
        for ts in itertools.product(rel.sorted_types(), repeat=n):
            template_fp: list[Optional[Label]] = []
            pair_cells = []
            for pos, (i, j) in enumerate(pairs):
                vec = tuple(t.label(i, j) for t in ts)
                if all(l is Label.EQ for l in vec):
                    template_fp.append(Label.EQ)
                else:
                    template_fp.append(None)
                    pair_cells.append((pos, cell_index(vec)))
            checks.append(
                _PreservationCheck(
                    tuple(template_fp), tuple(pair_cells), rel.fingerprints
                )
            )
    return _SearchSpace(symbols, table, flip_index, free, checks)


def search_behavior(
    template: TemplateLike, shape: Shape
) -> Optional[PairBehavior]:
    """Find a behavior acting as ``shape`` on the injective alphabet.

    The injective cells are pinned by the shape and the all-EQ cell maps to
    EQ; the EQ-mixed cells are search variables (paired up by arc reversal
    over the tournament).  Backtracking prunes with every preservation
    condition as soon as its last free cell is assigned, so an exhausted
    search is a proof that no such behavior exists.
    """
    base, relations = _template_relations(template)
    space = _build_search_space(base, relations, shape)
    table = space.table
    rep_position = {}
    for pos, idx in enumerate(space.free):
        rep_position[idx] = pos
        if space.flip_index is not None:
            rep_position[space.flip_index[idx]] = pos
    by_last: dict[int, list[_PreservationCheck]] = {}
    for check in space.checks:
        last = -1
        for _, cell in check.pair_cells:
            if table[cell] is None:
                last = max(last, rep_position[cell])
        by_last.setdefault(last, []).append(check)
    if not all(check.passes(table) for check in by_last.get(-1, [])):
        return None

    def assign(pos: int, value: Optional[Label]) -> None:
        idx = space.free[pos]
        table[idx] = value
        if space.flip_index is not None and space.flip_index[idx] != idx:
            table[space.flip_index[idx]] = None if value is None else value.flipped

    def dfs(pos: int) -> bool:
        if pos == len(space.free):
            return True
        for value in base.labels:
            assign(pos, value)
            if all(check.passes(table) for check in by_last.get(pos, [])):
                if dfs(pos + 1):
                    return True
        assign(pos, None)
        return False

    if not dfs(0):
        return None
    return PairBehavior(shape.arity, space.symbols, tuple(table))


def confirm_no_behavior(template: TemplateLike, shape: Shape) -> bool:
    """Re-check a failed search by enumerating every free-cell assignment.

    Returns True when no assignment passes all preservation conditions.
    Candidates are screened against the most recently violated condition
    first, so the enumeration stays cheap even at the 2^20 cap.
    """
    base, relations = _template_relations(template)
    space = _build_search_space(base, relations, shape)
    if len(space.free) > RECHECK_CELL_LIMIT:
        raise BudgetExceeded(
            f"full enumeration capped at {RECHECK_CELL_LIMIT} free cells"
        )
    table = space.table
    checks = list(space.checks)
    for assignment in itertools.product(base.labels, repeat=len(space.free)):
        for pos, value in zip(space.free, assignment):
            table[pos] = value
            if space.flip_index is not None and space.flip_index[pos] != pos:
                table[space.flip_index[pos]] = value.flipped
        failed = -1
        for i, check in enumerate(checks):
            if not check.passes(table):
                failed = i
                break
        if failed < 0:
            return False
        if failed > 0:
            checks.insert(0, checks.pop(failed))
    return True


class VerdictKind(Enum):
    NP_COMPLETE = "NP_COMPLETE"
    P_BOUNDED_WIDTH = "P_BOUNDED_WIDTH"
    P_NOT_BOUNDED_WIDTH = "P_NOT_BOUNDED_WIDTH"
    P_CONSTANT = "P_CONSTANT"
    EQUALITY_P = "EQUALITY_P"
    EQUALITY_NPC = "EQUALITY_NPC"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    witness: Optional[PairBehavior] = None
    shape: Optional[Shape] = None

    def __post_init__(self) -> None:
        needs_witness = self.kind in (
            VerdictKind.P_BOUNDED_WIDTH,
            VerdictKind.P_NOT_BOUNDED_WIDTH,
        )
        if needs_witness and (self.witness is None or self.shape is None):
            raise ParameterError("tractable width verdicts carry a witness")


def _partition_determined(rel: TypeSetRelation) -> bool:
    """Whether membership depends only on the equality pattern."""
    counts: dict[tuple[tuple[int, ...], ...], int] = {}
    for t in rel.types:
        counts[t.partition] = counts.get(t.partition, 0) + 1
    return all(
        count == 2 ** (len(partition) * (len(partition) - 1) // 2)
        for partition, count in counts.items()
    )


def _meet(
    p: tuple[tuple[int, ...], ...], q: tuple[tuple[int, ...], ...]
) -> tuple[tuple[int, ...], ...]:
    block_p = {pos: b for b, block in enumerate(p) for pos in block}
    block_q = {pos: b for b, block in enumerate(q) for pos in block}
    classes: dict[tuple[int, int], list[int]] = {}
    arity = sum(len(block) for block in p)
    for pos in range(arity):
        classes.setdefault((block_p[pos], block_q[pos]), []).append(pos)
    return tuple(
        tuple(block) for block in sorted(classes.values(), key=lambda b: b[0])
    )


def _meet_closed(rel: TypeSetRelation) -> bool:
    partitions = {t.partition for t in rel.types}
    return all(
        _meet(p, q) in partitions
        for p, q in itertools.product(partitions, repeat=2)
    )


def classify_reduct(template: TemplateLike) -> Verdict:
    """Decide complexity and width for a tournament or graph template.

    The cascade first catches the degenerate cases (a constant solution;
    relations that only constrain equalities), then searches behaviors: any
    majority or semilattice behavior gives bounded width, a minority
    behavior alone gives tractability without bounded width, and an
    exhausted search certifies NP-completeness.
    """
    base, relations = _template_relations(template)
    if base.kind == "kfree":
        raise UnsupportedBase(
            "no finite classification criterion for clique-free bases"
        )
    if all(LabeledType.all_equal(r.arity) in r.types for r in relations):
        return Verdict(VerdictKind.P_CONSTANT)
    if all(_partition_determined(r) for r in relations):
        one_block = all(
            LabeledType.all_equal(r.arity) in r.types for r in relations
        )
        if one_block or all(_meet_closed(r) for r in relations):
            return Verdict(VerdictKind.EQUALITY_P)
        return Verdict(VerdictKind.EQUALITY_NPC)
    if base.oriented:
        width_shapes = (Shape.TERNARY_MAJORITY,)
    else:
        width_shapes = (
            Shape.BINARY_SL_E,
            Shape.BINARY_SL_N,
            Shape.TERNARY_MAJORITY,
        )
    for shape in width_shapes:
        witness = search_behavior(relations, shape)
        if witness is not None:
            return Verdict(VerdictKind.P_BOUNDED_WIDTH, witness, shape)
    witness = search_behavior(relations, Shape.TERNARY_MINORITY)
    if witness is not None:
        return Verdict(
            VerdictKind.P_NOT_BOUNDED_WIDTH, witness, Shape.TERNARY_MINORITY
        )
    return Verdict(VerdictKind.NP_COMPLETE)


def _constraint_indices(
    instance: Instance, template: HomogTemplate
) -> list[tuple[TypeSetRelation, tuple[int, ...]]]:
    position = {v: i for i, v in enumerate(instance.variables)}
    out = []
    for name, scope in instance.constraints:
        rel = template.relations.get(name)
        if rel is None:
            raise SignatureMismatch(f"instance uses unknown relation {name}")
        if rel.arity != len(scope):
            raise SignatureMismatch(f"constraint {name} has arity {rel.arity}")
        out.append((rel, tuple(position[v] for v in scope)))
    return out


def solve_instance_brute(
    instance: Instance, template: HomogTemplate
) -> Optional[LabeledType]:
    """Exhaustive solver: search a labeled partition of the variables.

    A solution is exactly a complete type over the variable tuple whose
    projection to every constraint scope lies in the constraint's relation
    (and which avoids forbidden cliques over a clique-free base).  Variables
    are placed one at a time -- joining an existing block or opening a new
    one -- and each constraint is checked as soon as its scope is placed.
    """
    n = len(instance.variables)
    if n > BRUTE_VARIABLE_LIMIT:
        raise BudgetExceeded(
            f"brute search capped at {BRUTE_VARIABLE_LIMIT} variables"
        )
    constraints = _constraint_indices(instance, template)
    by_last: dict[int, list[tuple[TypeSetRelation, tuple[int, ...]]]] = {}
    for rel, scope in constraints:
        by_last.setdefault(max(scope), []).append((rel, scope))
    base = template.base
    block_of: list[int] = []
    blocks: list[list[int]] = []
    labels: dict[tuple[int, int], Label] = {}

    def state_label(p: int, q: int) -> Label:
        bp, bq = block_of[p], block_of[q]
        if bp == bq:
            return Label.EQ
        lbl = labels[(min(bp, bq), max(bp, bq))]
        return lbl if bp < bq else lbl.flipped

    def satisfied(rel: TypeSetRelation, scope: tuple[int, ...]) -> bool:
        fp = tuple(
            state_label(scope[a], scope[b])
            for a, b in itertools.combinations(range(len(scope)), 2)
        )
        return fp in rel.fingerprints

    def creates_clique(vec: Sequence[Label]) -> bool:
        neighbours = [b for b, lbl in enumerate(vec) if lbl is Label.E]
        for combo in itertools.combinations(neighbours, base.forbidden - 1):
            if all(
                labels[(x, y)] is Label.E
                for x, y in itertools.combinations(combo, 2)
            ):
                return True
        return False

    def place(i: int) -> Optional[LabeledType]:
        if i == n:
            return LabeledType(
                n,
                tuple(tuple(b) for b in blocks),
                tuple(
                    labels[(b1, b2)]
                    for b1, b2 in itertools.combinations(range(len(blocks)), 2)
                ),
            )
        options: list[Optional[tuple[Label, ...]]] = [None] * len(blocks)
        options += list(itertools.product(base.labels, repeat=len(blocks)))
        for choice_index, choice in enumerate(options):
            if choice is None:
                blocks[choice_index].append(i)
                block_of.append(choice_index)
                added: list[tuple[int, int]] = []
            else:
                if base.kind == "kfree" and creates_clique(choice):
                    continue
                added = [(b, len(blocks)) for b in range(len(blocks))]
                for (b, _), lbl in zip(added, choice):
                    labels[(b, len(blocks))] = lbl
                blocks.append([i])
                block_of.append(len(blocks) - 1)
            if all(satisfied(rel, scope) for rel, scope in by_last.get(i, [])):
                found = place(i + 1)
                if found is not None:
                    return found
            block_of.pop()
            if choice is None:
                blocks[choice_index].pop()
            else:
                blocks.pop()
                for key in added:
                    del labels[key]
        return None

    return place(0)


@dataclass(frozen=True, eq=False)
class HomogPatterns:
    """Pattern-space adapter: complete types as local consistency patterns."""

    template: HomogTemplate

    def patterns(self, variables: Sequence[str]) -> list[LabeledType]:
        return enumerate_types(len(variables), self.template.base)

    def restrict(
        self,
        variables: Sequence[str],
        pattern: LabeledType,
        sub: Sequence[str],
    ) -> LabeledType:
        position = {v: i for i, v in enumerate(variables)}
        return pattern.project(tuple(position[v] for v in sub))

    def satisfies(
        self,
        variables: Sequence[str],
        pattern: LabeledType,
        rel_name: str,
        scope: Sequence[str],
    ) -> bool:
        rel = self.template.relations.get(rel_name)
        if rel is None:
            raise SignatureMismatch(f"instance uses unknown relation {rel_name}")
        if rel.arity != len(scope):
            raise SignatureMismatch(f"constraint {rel_name} has arity {rel.arity}")
        position = {v: i for i, v in enumerate(variables)}
        idx = [position[v] for v in scope]
        fp = tuple(
            pattern.label(idx[a], idx[b])
            for a, b in itertools.combinations(range(len(idx)), 2)
        )
        return fp in rel.fingerprints
