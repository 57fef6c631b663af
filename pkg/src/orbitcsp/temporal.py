"""Constraint solving over the dense linear order of the rationals.

Relations are unions of order types: a k-tuple of rationals determines a
weak order on its positions (which coordinates are equal, which are
smaller), and a first-order definable k-ary relation is exactly a set of
such weak-order types.  Templates are expansions of (Q;<) by finitely many
relations of this kind.

Tractability hinges on four binary operations given by order and sign
conditions only:

    pp(x, y)  = x for x <= 0, and eps(y) > 0 for x > 0
    lex(x, y) < lex(x', y')  iff  x < x', or x = x' and y < y'
    ll(0, 0)  = 0;  ll groups x <= 0 below x > 0, ordering the lower
                group by lex(x, y) and the upper group by lex(y, x)

plus the duals (x, y) -> -f(-x, -y).  Since only order and sign matter,
the module never materialises rational values: operations are evaluated on
signed weak-order patterns, and instance solutions are weak orders on the
variable set (tuples of levels, bottom first).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    BudgetExceeded,
    MalformedPattern,
    NotFree,
    ParameterError,
    PreconditionFailed,
    SignatureMismatch,
    UnknownVariable,
)
from .polyengine import BooleanClass, boolean_classify, schaefer_solve
from .relstruct import FiniteStructure, Instance, hom_search, relation

ENUMERATION_LIMIT = 8       # weak orders on more positions get huge
PRESERVE_ARITY_LIMIT = 6    # pattern budget for preservation tests
ORACLE_VARIABLE_LIMIT = 7   # 47293 weak orders on 7 points

#: Solution shape: variables grouped into levels, bottom level first.
Levels = tuple[tuple[str, ...], ...]


def _canon(ranks: Sequence[int]) -> tuple[int, ...]:
    """Densely renumber comparable keys, preserving their order."""
    mapping = {r: i for i, r in enumerate(sorted(set(ranks)))}
    return tuple(mapping[r] for r in ranks)


@dataclass(frozen=True)
class WeakOrderType:
    """The order type of a tuple of rationals.

    ``ranks[i]`` is the 0-based level of position i, counted from the
    bottom; rank vectors are kept dense (every level up to the maximum is
    used), which makes them canonical.
    """

    ranks: tuple[int, ...]

    def __post_init__(self):
        if not self.ranks:
            raise MalformedPattern("a type needs at least one position")
        levels = set(self.ranks)
        if levels != set(range(len(levels))):
            raise MalformedPattern(f"rank vector {self.ranks} is not dense")

    @classmethod
    def from_values(cls, values: Sequence) -> "WeakOrderType":
        return cls(_canon(values))

    @property
    def arity(self) -> int:
        return len(self.ranks)

    @property
    def num_blocks(self) -> int:
        return max(self.ranks) + 1

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Positions grouped by level, bottom block first."""
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for pos, r in enumerate(self.ranks):
            out[r].append(pos)
        return tuple(tuple(b) for b in out)

    def restrict(self, positions: Sequence[int]) -> "WeakOrderType":
        """The induced type on a selection of positions (repeats allowed)."""
        return WeakOrderType(_canon([self.ranks[p] for p in positions]))

    def reverse(self) -> "WeakOrderType":
        """The type of the negated tuple: block order swapped."""
        top = self.num_blocks - 1
        return WeakOrderType(tuple(top - r for r in self.ranks))

    def respects(self, scope: Sequence[str]) -> bool:
        """Equal scope variables must sit on equal levels."""
        seen: dict[str, int] = {}
        for pos, var in enumerate(scope):
            if var in seen and seen[var] != self.ranks[pos]:
                return False
            seen.setdefault(var, self.ranks[pos])
        return True

    def __str__(self) -> str:
        return "<".join("=".join(str(p + 1) for p in block)
                        for block in self.blocks)


@dataclass(frozen=True)
class SignedWeakOrderType:
    """A weak-order type with a sign annotation.

    The first ``negative_blocks`` blocks hold negative values; if
    ``has_zero`` is set, the next block is exactly zero; everything above
    is positive.  Signs are therefore monotone in the order by
    construction.
    """

    order: WeakOrderType
    negative_blocks: int
    has_zero: bool

    def __post_init__(self):
        nb = self.order.num_blocks
        if not 0 <= self.negative_blocks <= nb:
            raise MalformedPattern("negative block count out of range")
        if self.has_zero and self.negative_blocks >= nb:
            raise MalformedPattern("zero block does not exist")

    @classmethod
    def from_signs(cls, order: WeakOrderType,
                   signs: Sequence[int]) -> "SignedWeakOrderType":
        """Attach per-position signs, validating monotonicity."""
        block_signs = []
        for block in order.blocks:
            got = {signs[p] for p in block}
            if len(got) > 1:
                raise MalformedPattern("equal values with distinct signs")
            block_signs.append(got.pop())
        if block_signs != sorted(block_signs) or block_signs.count(0) > 1:
            raise MalformedPattern(f"signs {signs} disagree with the order")
        return cls(order, block_signs.count(-1), 0 in block_signs)

    @property
    def arity(self) -> int:
        return self.order.arity

    def sign_of_position(self, pos: int) -> int:
        r = self.order.ranks[pos]
        if r < self.negative_blocks:
            return -1
        if self.has_zero and r == self.negative_blocks:
            return 0
        return 1

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(self.sign_of_position(p) for p in range(self.arity))

    def negated(self) -> "SignedWeakOrderType":
        """The pattern of the negated tuple."""
        positive = (self.order.num_blocks - self.negative_blocks
                    - (1 if self.has_zero else 0))
        return SignedWeakOrderType(self.order.reverse(), positive,
                                   self.has_zero)

    def __str__(self) -> str:
        marks = {-1: "-", 0: "0", 1: "+"}
        return f"{self.order} [{''.join(marks[s] for s in self.signs)}]"


@lru_cache(maxsize=None)
def enumerate_weak_orders(k: int) -> tuple[WeakOrderType, ...]:
    """All weak-order types of arity k, sorted by rank vector."""
    if k > ENUMERATION_LIMIT:
        raise BudgetExceeded(f"weak orders on {k} > {ENUMERATION_LIMIT} positions")
    if k < 1:
        raise ParameterError("arity must be positive")
    out: list[WeakOrderType] = []
    ranks = [0] * k
    counts = [0] * k

    def go(i: int, top: int, missing: int) -> None:
        # top: highest rank used so far (-1 initially); missing: unused
        # levels below it.  Dense completions need missing <= slots left.
        if i == k:
            if missing == 0:
                out.append(WeakOrderType(tuple(ranks)))
            return
        slots = k - i - 1
        for r in range(k):
            if r > top:
                gap = missing + (r - top - 1)
                new_top = r
            else:
                gap = missing - (1 if counts[r] == 0 else 0)
                new_top = top
            if gap > slots:
                continue
            ranks[i] = r
            counts[r] += 1
            go(i + 1, new_top, gap)
            counts[r] -= 1

    go(0, -1, 0)
    return tuple(out)


@dataclass(frozen=True)
class TemporalRelation:
    """A finite union of weak-order types of a fixed arity."""

    arity: int
    types: frozenset[WeakOrderType]

    def __post_init__(self):
        if self.arity < 1:
            raise ParameterError("relation arity must be positive")
        for t in self.types:
            if t.arity != self.arity:
                raise MalformedPattern(f"type {t} has wrong arity")

    def sorted_types(self) -> list[WeakOrderType]:
        return sorted(self.types, key=lambda t: t.ranks)

    def reverse(self) -> "TemporalRelation":
        return TemporalRelation(self.arity,
                                frozenset(t.reverse() for t in self.types))


def temporal_relation(arity: int, types: Iterable[WeakOrderType]) -> TemporalRelation:
    return TemporalRelation(arity, frozenset(types))


#: The order type of a strictly increasing pair, and the relation {<}.
LT_TYPE = WeakOrderType((0, 1))
LT = temporal_relation(2, [LT_TYPE])


@dataclass(frozen=True, eq=False)
class TemporalTemplate:
    """An expansion of (Q;<): named relations, one of them exactly {<}."""

    relations: Mapping[str, TemporalRelation]

    def __post_init__(self):
        if not any(rel == LT for rel in self.relations.values()):
            raise ParameterError("template must contain the order relation <")


class TemporalOp(enum.Enum):
    PP = "pp"
    LL = "ll"
    LEX = "lex"
    DUAL_PP = "dual_pp"
    DUAL_LL = "dual_ll"
    DUAL_LEX = "dual_lex"

    @property
    def is_dual(self) -> bool:
        return self.value.startswith("dual_")

    @property
    def base(self) -> "TemporalOp":
        return TemporalOp(self.value[5:]) if self.is_dual else self


def apply_temporal_op(op: TemporalOp,
                      joint: SignedWeakOrderType) -> SignedWeakOrderType:
    """Evaluate a binary operation componentwise on a joint pattern.

    The joint pattern has arity 2k: positions 1..k are the first argument
    a, positions k+1..2k the second argument b.  The result is the pattern
    of (op(a_1,b_1), ..., op(a_k,b_k)).  Duals are evaluated by
    conjugation: negate the input pattern, apply the base operation,
    negate the output.
    """
    if joint.arity % 2:
        raise MalformedPattern("joint pattern needs even arity")
    if op.is_dual:
        return apply_temporal_op(op.base, joint.negated()).negated()
    k = joint.arity // 2
    ranks = joint.order.ranks
    # Only a-to-a and b-to-b comparisons matter below, so the two halves
    # are renumbered independently; how they interleave is irrelevant.
    ra = _canon(ranks[:k])
    rb = _canon(ranks[k:])
    sa = joint.signs[:k]
    sb = joint.signs[k:]
    keys: list[tuple[int, ...]] = []
    signs: list[int] = []
    for i in range(k):
        if op is TemporalOp.PP:
            # pp(x, y) = x for x <= 0, else a positive value ordered by y.
            if sa[i] <= 0:
                keys.append((0, ra[i], 0))
                signs.append(sa[i])
            else:
                keys.append((1, rb[i], 0))
                signs.append(1)
        elif op is TemporalOp.LL:
            # x <= 0 sorts below x > 0; lex(x, y) below, lex(y, x) above.
            if sa[i] <= 0:
                keys.append((0, ra[i], rb[i]))
                signs.append(sa[i] if sa[i] < 0 else sb[i])
            else:
                keys.append((1, rb[i], ra[i]))
                signs.append(1)
        elif op is TemporalOp.LEX:
            # Order determined by (x, y) lexicographically; a realisation
            # with positive values exists, which fixes the sign convention.
            keys.append((0, ra[i], rb[i]))
            signs.append(1)
        else:  # pragma: no cover - exhaustive enum
            raise ParameterError(f"unknown operation {op}")
    return SignedWeakOrderType.from_signs(WeakOrderType.from_values(keys),
                                          signs)


@dataclass(frozen=True)
class TemporalCounterexample:
    """A joint pattern whose image escapes the relation.  Falsy."""

    op: TemporalOp
    left: WeakOrderType
    right: WeakOrderType
    joint: SignedWeakOrderType
    image: SignedWeakOrderType

    def __bool__(self) -> bool:
        return False


def _sign_cuts(num_blocks: int):
    for neg in range(num_blocks + 1):
        yield neg, False
        if neg < num_blocks:
            yield neg, True


def preserves_temporal(op: TemporalOp, rel: TemporalRelation):
    """True, or a falsy counterexample pattern.

    Every componentwise application to members of the relation is covered
    by enumerating type pairs and sign annotations of the first argument:
    the image order never depends on how the two halves interleave nor on
    the signs of the second half, so one canonical joint per choice (all
    b-blocks above the a-blocks, positive) suffices.
    """
    if rel.arity > PRESERVE_ARITY_LIMIT:
        raise BudgetExceeded(f"arity {rel.arity} > {PRESERVE_ARITY_LIMIT}")
    for ta in rel.sorted_types():
        shift = ta.num_blocks
        for neg, zero in _sign_cuts(shift):
            for tb in rel.sorted_types():
                joint = SignedWeakOrderType(
                    WeakOrderType(ta.ranks + tuple(r + shift for r in tb.ranks)),
                    neg, zero)
                image = apply_temporal_op(op, joint)
                if image.order not in rel.types:
                    return TemporalCounterexample(op, ta, tb, joint, image)
    return True


# ---------------------------------------------------------------------------
# The two-element quotient structure and free sets.
#
# Restricting a template to the nonnegative rationals and collapsing the
# positives to a single point leaves the two-element domain {Z, P}; a
# k-tuple over {Z, P} belongs to the image of a relation iff some type
# admits a nonnegative realisation whose zero set is marked Z.  Zeros are
# minimal and mutually equal, so the possible zero sets of a type are
# the empty set and its bottom block.  Z is encoded as 1 and P as 0, which
# makes the induced action of ll the boolean AND.
# ---------------------------------------------------------------------------

Z_VALUE = 1
P_VALUE = 0

_DISPATCH_ORDER = (
    BooleanClass.HORN_AND,
    BooleanClass.DUAL_HORN_OR,
    BooleanClass.MAJORITY_2SAT,
    BooleanClass.MINORITY_AFFINE,
    BooleanClass.CONSTANT0,
    BooleanClass.CONSTANT1,
)

_Constraint = tuple[TemporalRelation, tuple[str, ...]]

#: The solver class of a quotient structure depends only on its relation
#: contents, which recur across master rounds; memoised accordingly.
_classify_cache: dict[frozenset, frozenset[BooleanClass]] = {}


def _fin_patterns(rel: TemporalRelation,
                  scope: Optional[tuple[str, ...]] = None) -> set[tuple[int, ...]]:
    """Zero/positive patterns realised by the relation's types.

    With a scope given, types that assign distinct levels to repeated
    variables cannot be realised by a valuation and are skipped.
    """
    patterns: set[tuple[int, ...]] = set()
    for t in rel.types:
        if scope is not None and not t.respects(scope):
            continue
        patterns.add(tuple(P_VALUE for _ in range(rel.arity)))
        bottom = set(t.blocks[0])
        patterns.add(tuple(Z_VALUE if i in bottom else P_VALUE
                           for i in range(rel.arity)))
    return patterns


def build_afin(template: TemporalTemplate) -> FiniteStructure:
    """The two-element quotient template, with both points named."""
    rels = {}
    for name in sorted(template.relations):
        if name in ("Z", "P"):
            raise SignatureMismatch(f"relation name {name} is reserved")
        rel = template.relations[name]
        rels[name] = relation(rel.arity, _fin_patterns(rel))
    rels["Z"] = relation(1, [(Z_VALUE,)])
    rels["P"] = relation(1, [(P_VALUE,)])
    return FiniteStructure(2, rels)


def _constraint_list(instance: Instance,
                     template: TemporalTemplate) -> list[_Constraint]:
    out = []
    for name, scope in instance.constraints:
        rel = template.relations.get(name)
        if rel is None:
            raise SignatureMismatch(f"unknown relation {name}")
        if rel.arity != len(scope):
            raise SignatureMismatch(
                f"{name} has arity {rel.arity}, scope {scope}")
        out.append((rel, scope))
    return out


def _solve_afin(variables: tuple[str, ...], constraints: Sequence[_Constraint],
                pins: Mapping[str, int]) -> Optional[dict[str, int]]:
    """Solve the quotient instance, dispatching on the detected class."""
    rels: dict[str, object] = {}
    names: dict[tuple[int, frozenset], str] = {}
    inst_constraints = []
    for rel, scope in constraints:
        patterns = frozenset(_fin_patterns(rel, scope))
        key = (rel.arity, patterns)
        name = names.get(key)
        if name is None:
            name = f"R{len(names)}"
            names[key] = name
            rels[name] = relation(rel.arity, patterns)
        inst_constraints.append((name, scope))
    rels["Z"] = relation(1, [(Z_VALUE,)])
    rels["P"] = relation(1, [(P_VALUE,)])
    for v in variables:
        if v in pins:
            inst_constraints.append(("Z" if pins[v] == Z_VALUE else "P", (v,)))
    quotient = FiniteStructure(2, rels)
    inst = Instance(variables, tuple(inst_constraints))
    cache_key = frozenset(names)
    classes = _classify_cache.get(cache_key)
    if classes is None:
        classes = boolean_classify(quotient)
        _classify_cache[cache_key] = classes
    for cls in _DISPATCH_ORDER:
        if cls in classes:
            return schaefer_solve(inst, quotient, cls)
    return hom_search(inst, quotient)


def is_free_set(instance: Instance, template: TemporalTemplate,
                subset: Iterable[str]) -> bool:
    """Definition check: every intersecting constraint admits a valuation
    whose minimum is attained exactly on the subset's variables."""
    sub = frozenset(subset)
    for v in sub:
        if v not in instance.variables:
            raise UnknownVariable(v)
    if not sub:
        return False
    for rel, scope in _constraint_list(instance, template):
        positions = frozenset(i for i, v in enumerate(scope) if v in sub)
        if not positions:
            continue
        if not any(t.respects(scope) and frozenset(t.blocks[0]) == positions
                   for t in rel.types):
            return False
    return True


def free_set_containing(instance: Instance, template: TemporalTemplate,
                        x: str) -> Optional[frozenset[str]]:
    """A free set containing x, or None.

    Free sets containing x correspond exactly to solutions of the quotient
    instance with x pinned to Z; the returned set is the Z-preimage of the
    canonical solution.
    """
    if x not in instance.variables:
        raise UnknownVariable(x)
    constraints = _constraint_list(instance, template)
    solution = _solve_afin(instance.variables, constraints, {x: Z_VALUE})
    if solution is None:
        return None
    return frozenset(v for v in instance.variables if solution[v] == Z_VALUE)


def _shrink_free_set(variables: tuple[str, ...],
                     constraints: Sequence[_Constraint],
                     start: frozenset[str]) -> frozenset[str]:
    current = [v for v in variables if v in start]
    improved = True
    while improved:
        improved = False
        for x in current:
            for y in current:
                if y == x:
                    continue
                # Keep x at the bottom, push y and everything outside the
                # candidate strictly above: solutions are proper subsets.
                pins = {x: Z_VALUE, y: P_VALUE}
                for w in variables:
                    if w not in current:
                        pins.setdefault(w, P_VALUE)
                solution = _solve_afin(variables, constraints, pins)
                if solution is not None:
                    current = [v for v in variables
                               if solution[v] == Z_VALUE]
                    improved = True
                    break
            if improved:
                break
    return frozenset(current)


def minimal_free_set(instance: Instance, template: TemporalTemplate,
                     subset: Iterable[str]) -> frozenset[str]:
    """Shrink a free set until no proper free subset remains."""
    sub = frozenset(subset)
    if not is_free_set(instance, template, sub):
        raise NotFree(f"{sorted(sub)} is not a free set")
    constraints = _constraint_list(instance, template)
    return _shrink_free_set(instance.variables, constraints, sub)


def _run_master(variables: tuple[str, ...],
                constraints: Sequence[_Constraint],
                use_minimal: bool) -> Optional[Levels]:
    remaining = list(variables)
    current = list(constraints)
    levels: list[tuple[str, ...]] = []
    while remaining:
        solution = None
        for x in remaining:
            solution = _solve_afin(tuple(remaining), current, {x: Z_VALUE})
            if solution is not None:
                break
        if solution is None:
            # A satisfying weak order would make its bottom level a free
            # set, so the search failing for every variable refutes it.
            return None
        level = frozenset(v for v in remaining if solution[v] == Z_VALUE)
        if use_minimal:
            level = _shrink_free_set(tuple(remaining), current, level)
        levels.append(tuple(v for v in remaining if v in level))
        projected: list[_Constraint] = []
        for rel, scope in current:
            positions = frozenset(i for i, v in enumerate(scope)
                                  if v in level)
            if not positions:
                projected.append((rel, scope))
                continue
            keep = [t for t in rel.types
                    if frozenset(t.blocks[0]) == positions]
            rest = [i for i in range(len(scope)) if i not in positions]
            if not rest:
                assert keep, "level contradicts a fully covered constraint"
                continue
            types = frozenset(t.restrict(rest) for t in keep)
            assert types, "level starves an intersecting constraint"
            projected.append((TemporalRelation(len(rest), types),
                              tuple(scope[i] for i in rest)))
        current = projected
        remaining = [v for v in remaining if v not in level]
    return tuple(levels)


def solve_master(instance: Instance, template: TemporalTemplate,
                 mode: TemporalOp) -> Optional[Levels]:
    """Level-by-level solver for templates preserved by the chosen mode.

    Repeatedly commits a free set (a minimal one in the ll modes) as the
    next level and projects all constraints past it; dual modes run the
    base mode on the reversed relations and flip the resulting order.
    Returns the levels bottom-up, or None when unsatisfiable.
    """
    if mode in (TemporalOp.LEX, TemporalOp.DUAL_LEX):
        raise ParameterError("lex does not drive a level solver")
    for name in sorted(template.relations):
        if preserves_temporal(mode, template.relations[name]) is not True:
            raise PreconditionFailed(
                f"{mode.value} does not preserve {name}")
    constraints = _constraint_list(instance, template)
    if mode.is_dual:
        flipped = [(rel.reverse(), scope) for rel, scope in constraints]
        levels = _run_master(instance.variables, flipped,
                             mode.base is TemporalOp.LL)
        if levels is not None:
            levels = tuple(reversed(levels))
    else:
        levels = _run_master(instance.variables, constraints,
                             mode is TemporalOp.LL)
    if levels is None:
        return None
    rank = {v: i for i, lvl in enumerate(levels) for v in lvl}
    for rel, scope in constraints:
        induced = WeakOrderType.from_values([rank[v] for v in scope])
        assert induced in rel.types, "levels fail the original instance"
    return levels


def brute_oracle(instance: Instance,
                 template: TemporalTemplate) -> Optional[Levels]:
    """Scan all weak orders on the variables, smallest rank vector first."""
    n = len(instance.variables)
    if n > ORACLE_VARIABLE_LIMIT:
        raise BudgetExceeded(f"{n} variables > {ORACLE_VARIABLE_LIMIT}")
    index = {v: i for i, v in enumerate(instance.variables)}
    checks: list[list[tuple[tuple[int, ...], frozenset]]] = [[] for _ in range(n)]
    for rel, scope in _constraint_list(instance, template):
        idx = tuple(index[v] for v in scope)
        signatures = frozenset(t.ranks for t in rel.types)
        checks[max(idx)].append((idx, signatures))
    ranks = [0] * n
    counts = [0] * n

    def go(i: int, top: int, missing: int) -> Optional[tuple[int, ...]]:
        if i == n:
            return tuple(ranks) if missing == 0 else None
        slots = n - i - 1
        for r in range(n):
            if r > top:
                gap = missing + (r - top - 1)
                new_top = r
            else:
                gap = missing - (1 if counts[r] == 0 else 0)
                new_top = top
            if gap > slots:
                continue
            ranks[i] = r
            # Prefix ranks never change later, so constraints close as
            # soon as their last variable is placed.
            if all(_canon([ranks[j] for j in idx]) in signatures
                   for idx, signatures in checks[i]):
                counts[r] += 1
                found = go(i + 1, new_top, gap)
                counts[r] -= 1
                if found is not None:
                    return found
        return None

    vector = go(0, -1, 0)
    if vector is None:
        return None
    order = WeakOrderType(vector)
    return tuple(tuple(instance.variables[p] for p in block)
                 for block in order.blocks)


@dataclass(frozen=True)
class TemporalVerdict:
    """Outcome of the tractability test for a temporal template."""

    polynomial: bool
    mode: Optional[TemporalOp]
    counterexamples: tuple[tuple[TemporalOp, str, TemporalCounterexample], ...]


def classify_temporal(template: TemporalTemplate) -> TemporalVerdict:
    """First preserved mode wins; otherwise NP-complete with witnesses."""
    found: list[tuple[TemporalOp, str, TemporalCounterexample]] = []
    for mode in (TemporalOp.PP, TemporalOp.DUAL_PP,
                 TemporalOp.LL, TemporalOp.DUAL_LL):
        witness = None
        for name in sorted(template.relations):
            result = preserves_temporal(mode, template.relations[name])
            if result is not True:
                witness = (mode, name, result)
                break
        if witness is None:
            return TemporalVerdict(True, mode, tuple(found))
        found.append(witness)
    return TemporalVerdict(False, None, tuple(found))


class TemporalPatterns:
    """Adapter exposing weak orders as local consistency patterns."""

    def __init__(self, template: TemporalTemplate):
        self.template = template

    def patterns(self, variables):
        return enumerate_weak_orders(len(variables))

    def restrict(self, variables, pattern, sub):
        pos = {v: i for i, v in enumerate(variables)}
        return pattern.restrict([pos[v] for v in sub])

    def satisfies(self, variables, pattern, rel_name, scope):
        pos = {v: i for i, v in enumerate(variables)}
        induced = pattern.restrict([pos[v] for v in scope])
        return induced in self.template.relations[rel_name].types
