"""(k,l)-local-consistency fixpoint over pluggable local-pattern spaces.

The engine derives, for every at-most-k-element set of instance variables,
the strongest constraint implied by looking at at most l variables at a time.
It is agnostic about what a "local pattern" is: assignments into a finite
domain, weak orders, or labeled partitions all plug in through the small
:class:`PatternSpace` interface, so the same fixpoint serves finite,
temporal, and homogeneous-base instances.

Rejection is reported through the :data:`EMPTY_DERIVED` sentinel: some
subset's constraint became empty, which soundly implies the instance has no
solution.  The converse holds only for templates of bounded width.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Protocol, Sequence, Union

from .errors import ParameterError
from .relstruct import FiniteStructure, Instance, check_signature


class PatternSpace(Protocol):
    """What the fixpoint needs to know about local solution fragments."""

    def patterns(self, variables: tuple[str, ...]) -> Sequence[object]:
        """All candidate patterns on this sorted variable tuple."""

    def restrict(self, variables: tuple[str, ...], pattern: object,
                 sub: tuple[str, ...]) -> object:
        """The induced pattern on a sub-tuple of the variables."""

    def satisfies(self, variables: tuple[str, ...], pattern: object,
                  rel_name: str, scope: tuple[str, ...]) -> bool:
        """Does the pattern satisfy one constraint whose scope lies inside
        the variable tuple?  (Scopes may repeat variables.)"""


class FinitePatterns:
    """Pattern space of a finite template: patterns are value tuples."""

    def __init__(self, template: FiniteStructure):
        self.template = template

    def patterns(self, variables):
        return list(product(range(self.template.domain_size), repeat=len(variables)))

    def restrict(self, variables, pattern, sub):
        pos = {v: i for i, v in enumerate(variables)}
        return tuple(pattern[pos[v]] for v in sub)

    def satisfies(self, variables, pattern, rel_name, scope):
        pos = {v: i for i, v in enumerate(variables)}
        return tuple(pattern[pos[v]] for v in scope) in self.template.relations[rel_name].tuples


class _EmptyDerived:
    """Singleton result: some derived constraint became empty."""

    __slots__ = ()

    def __repr__(self):
        return "EMPTY_DERIVED"

    def __bool__(self):
        return False


EMPTY_DERIVED = _EmptyDerived()


@dataclass
class ConsistencyState:
    """Fixpoint state: for each at-most-k variable tuple (in declaration
    order), the set of surviving local patterns."""

    k: int
    l: int
    variables: tuple[str, ...]
    allowed: dict[tuple[str, ...], set]

    def key(self, subset) -> tuple[str, ...]:
        order = {v: i for i, v in enumerate(self.variables)}
        return tuple(sorted(set(subset), key=order.__getitem__))

    def count(self, subset) -> int:
        return len(self.allowed[self.key(subset)])


def establish_kl(instance: Instance,
                 template: Union[FiniteStructure, PatternSpace],
                 k: int = 2, l: int = 3):
    """Run the (k,l)-consistency fixpoint.

    Returns a :class:`ConsistencyState`, or :data:`EMPTY_DERIVED` as soon as
    some subset's pattern set becomes empty.  The fixpoint is independent of
    processing order; supersets are swept in lexicographic order for
    reproducibility of the work done.
    """
    if k < 1 or l < k:
        raise ParameterError(f"need 1 <= k <= l, got ({k}, {l})")
    if isinstance(template, FiniteStructure):
        check_signature(instance, template)
        space: PatternSpace = FinitePatterns(template)
    else:
        space = template

    variables = instance.variables
    n = len(variables)
    k_eff = min(k, n)
    l_eff = min(l, n)

    def subsets(max_size: int) -> list[tuple[str, ...]]:
        out = []
        for size in range(1, max_size + 1):
            out.extend(combinations(variables, size))
        return out

    small = subsets(k_eff)
    constraints = list(instance.constraints)

    def constraints_inside(varset: frozenset[str]):
        return [(name, scope) for name, scope in constraints
                if set(scope) <= varset]

    # Initial constraints on each small subset.
    allowed: dict[tuple[str, ...], set] = {}
    for S in small:
        inside = constraints_inside(frozenset(S))
        keep = set()
        for p in space.patterns(S):
            if all(space.satisfies(S, p, name, scope) for name, scope in inside):
                keep.add(p)
        if not keep:
            return EMPTY_DERIVED
        allowed[S] = keep

    # Precompute, per superset L: its constraints, its small subsets, and the
    # (cached) pattern list.
    sweeps = []
    for L in subsets(l_eff):
        subs = [S for S in small if set(S) <= set(L)]
        sweeps.append((L, constraints_inside(frozenset(L)), subs))

    pattern_cache: dict[tuple[str, ...], list] = {}

    changed = True
    while changed:
        changed = False
        for L, inside, subs in sweeps:
            if L not in pattern_cache:
                pattern_cache[L] = [
                    p for p in space.patterns(L)
                    if all(space.satisfies(L, p, name, scope) for name, scope in inside)
                ]
            viable = [
                p for p in pattern_cache[L]
                if all(space.restrict(L, p, S) in allowed[S] for S in subs)
            ]
            for S in subs:
                projected = {space.restrict(L, p, S) for p in viable}
                if projected != allowed[S]:
                    # Each viable pattern restricts into allowed[S], so this
                    # is a strict shrink.
                    allowed[S] = projected
                    changed = True
                    if not projected:
                        return EMPTY_DERIVED
    return ConsistencyState(k, l, variables, allowed)
