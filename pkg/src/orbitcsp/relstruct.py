"""Finite relational structures, instances over them, and a deterministic
homomorphism search.

A :class:`FiniteStructure` is a template: a domain ``{0, ..., domain_size-1}``
together with named relations.  An :class:`Instance` is a conjunctive query
over such a template; :func:`hom_search` decides whether the instance maps
homomorphically into the template and returns the first witness found under a
fixed search order (variables in declaration order, values ascending).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Optional

from .errors import BudgetExceeded, SignatureMismatch

POWER_DOMAIN_LIMIT = 4096


@dataclass(frozen=True)
class Relation:
    """A named relation's content: arity plus the set of allowed tuples."""

    arity: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("relation arity must be at least 1")
        for t in self.tuples:
            if len(t) != self.arity:
                raise ValueError(f"tuple {t} does not match arity {self.arity}")

    def sorted_tuples(self) -> list[tuple[int, ...]]:
        return sorted(self.tuples)


def relation(arity: int, tuples: Iterable[tuple[int, ...]]) -> Relation:
    return Relation(arity, frozenset(tuple(t) for t in tuples))


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    """A finite template over the domain {0, ..., domain_size - 1}."""

    domain_size: int
    relations: Mapping[str, Relation]

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError("domain_size must be positive")
        for name, rel in self.relations.items():
            for t in rel.tuples:
                if any(not (0 <= v < self.domain_size) for v in t):
                    raise ValueError(
                        f"relation {name}: tuple {t} leaves the domain"
                    )

    @property
    def domain(self) -> range:
        return range(self.domain_size)


@dataclass(frozen=True)
class Instance:
    """A conjunctive instance: ordered variables plus constraints naming
    template relations.  Declaration order of variables is the search order
    used by every deterministic solver in this package."""

    variables: tuple[str, ...]
    constraints: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        seen = set()
        for v in self.variables:
            if v in seen:
                raise ValueError(f"duplicate variable {v!r}")
            seen.add(v)
        for name, scope in self.constraints:
            for v in scope:
                if v not in seen:
                    raise ValueError(f"constraint {name}{scope} names unknown variable {v!r}")


def make_instance(variables: Iterable[str],
                  constraints: Iterable[tuple[str, Iterable[str]]]) -> Instance:
    return Instance(tuple(variables),
                    tuple((name, tuple(scope)) for name, scope in constraints))


def check_signature(instance: Instance, template: FiniteStructure) -> None:
    """Raise SignatureMismatch unless every constraint names a declared
    relation with the right arity."""
    for name, scope in instance.constraints:
        rel = template.relations.get(name)
        if rel is None:
            raise SignatureMismatch(f"instance uses undeclared relation {name!r}")
        if rel.arity != len(scope):
            raise SignatureMismatch(
                f"constraint {name}{scope}: arity {len(scope)} != declared {rel.arity}"
            )


def hom_search(instance: Instance, template: FiniteStructure) -> Optional[dict[str, int]]:
    """Backtracking search with forward checking.

    Deterministic: variables are assigned in declaration order and values are
    tried in ascending order, so the returned witness is canonical.  Returns
    None when the instance has no homomorphism into the template.
    """
    check_signature(instance, template)
    variables = instance.variables
    index = {v: i for i, v in enumerate(variables)}
    cons = [(template.relations[name].tuples, tuple(index[v] for v in scope))
            for name, scope in instance.constraints]
    # Constraints indexed by the variable that completes them / touches them.
    touching: list[list[int]] = [[] for _ in variables]
    for ci, (_, scope) in enumerate(cons):
        for vi in set(scope):
            touching[vi].append(ci)

    n = len(variables)
    domain = list(template.domain)
    domains: list[list[int]] = [list(domain) for _ in range(n)]
    assignment: list[Optional[int]] = [None] * n

    def consistent(ci: int) -> bool:
        tuples, scope = cons[ci]
        # Fully assigned: membership test.  One unassigned: prune its domain.
        missing = [vi for vi in scope if assignment[vi] is None]
        if not missing:
            return tuple(assignment[vi] for vi in scope) in tuples
        unset = set(missing)
        if len(unset) == 1:
            (hole,) = unset
            allowed = set()
            for t in tuples:
                ok = True
                val = None
                for pos, vi in enumerate(scope):
                    if vi == hole:
                        if val is None:
                            val = t[pos]
                        elif val != t[pos]:
                            ok = False
                            break
                    elif assignment[vi] != t[pos]:
                        ok = False
                        break
                if ok and val is not None:
                    allowed.add(val)
            domains[hole] = [v for v in domains[hole] if v in allowed]
            return bool(domains[hole])
        return True

    def extend(depth: int) -> bool:
        if depth == n:
            return True
        saved = [list(d) for d in domains]
        for value in saved[depth]:
            assignment[depth] = value
            ok = all(consistent(ci) for ci in touching[depth])
            if ok and extend(depth + 1):
                return True
            assignment[depth] = None
            for i in range(n):
                domains[i] = list(saved[i])
        return False

    if extend(0):
        return {v: assignment[i] for i, v in enumerate(variables)}
    return None


def encode_tuple(values: tuple[int, ...], domain_size: int) -> int:
    """Row-major mixed-radix code of a tuple (first coordinate most
    significant)."""
    code = 0
    for v in values:
        code = code * domain_size + v
    return code


def decode_tuple(code: int, domain_size: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(code % domain_size)
        code //= domain_size
    return tuple(reversed(out))


def power_structure(template: FiniteStructure, n: int,
                    limit: int = POWER_DOMAIN_LIMIT) -> FiniteStructure:
    """The n-th direct power.  Domain elements are codes of n-tuples under
    :func:`encode_tuple`; a tuple of codes is in a power relation iff every
    coordinate-wise section is in the base relation."""
    if n < 1:
        raise ValueError("power exponent must be positive")
    size = template.domain_size ** n
    if size > limit:
        raise BudgetExceeded(f"power domain {size} exceeds limit {limit}")
    relations = {}
    for name, rel in template.relations.items():
        rows = rel.sorted_tuples()
        tuples = set()
        for sections in product(rows, repeat=n):
            # sections[j] supplies coordinate j of every power element.
            members = tuple(
                encode_tuple(tuple(sections[j][i] for j in range(n)), template.domain_size)
                for i in range(rel.arity)
            )
            tuples.add(members)
        relations[name] = Relation(rel.arity, frozenset(tuples))
    return FiniteStructure(size, relations)


def structure_as_instance(struct: FiniteStructure, prefix: str = "t") -> Instance:
    """Present a structure as the instance whose solutions are exactly the
    homomorphisms out of it (one variable per domain element, one constraint
    per relation tuple)."""
    variables = tuple(f"{prefix}{i}" for i in struct.domain)
    constraints = []
    for name in sorted(struct.relations):
        for t in struct.relations[name].sorted_tuples():
            constraints.append((name, tuple(f"{prefix}{v}" for v in t)))
    return Instance(variables, tuple(constraints))
