"""Exact cost arithmetic, weighted relations and valued constraint instances.

All costs are non-negative rationals extended with a single absorbing
infinite value; no floating point is used anywhere.  A weighted relation is
a partial map from tuples to finite costs: a tuple absent from the map is
forbidden, i.e. has infinite cost, and the key set of the map is the
feasibility relation.  Domain labels are opaque strings ordered by
declaration; every canonical tuple ordering below is lexicographic in that
declaration order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import StructureError


@dataclass(frozen=True, slots=True)
class Cost:
    """A non-negative exact rational cost, or positive infinity.

    ``frac is None`` encodes infinity.  Finite values are canonical reduced
    fractions (``Fraction`` guarantees gcd-reduced form with a positive
    denominator).  Addition is absorbing in the infinite value, scalar
    multiplication is restricted to non-negative rationals, and the order is
    total with every finite value below infinity.
    """

    frac: Fraction | None

    def __post_init__(self):
        if self.frac is not None:
            if not isinstance(self.frac, Fraction):
                object.__setattr__(self, "frac", Fraction(self.frac))
            if self.frac < 0:
                raise ValueError(f"costs must be non-negative, got {self.frac}")

    @staticmethod
    def of(value) -> "Cost":
        """Build a finite cost from an int, Fraction or 'p/q' string."""
        if isinstance(value, Cost):
            return value
        return Cost(Fraction(value))

    @staticmethod
    def parse(text: str) -> "Cost":
        """Parse 'p/q', 'p' or 'inf'."""
        text = text.strip()
        if text == "inf":
            return INF
        return Cost(Fraction(text))

    @property
    def is_finite(self) -> bool:
        return self.frac is not None

    def as_fraction(self) -> Fraction:
        if self.frac is None:
            raise ValueError("infinite cost has no rational value")
        return self.frac

    def __add__(self, other: "Cost") -> "Cost":
        if not isinstance(other, Cost):
            return NotImplemented
        if self.frac is None or other.frac is None:
            return INF
        return Cost(self.frac + other.frac)

    def __radd__(self, other) -> "Cost":
        if other == 0:  # let sum() start from 0
            return self
        return NotImplemented

    def scale(self, k: Fraction | int) -> "Cost":
        """Multiply by a non-negative rational scalar."""
        k = Fraction(k)
        if k < 0:
            raise ValueError("scalar must be non-negative")
        if self.frac is None:
            return ZERO if k == 0 else INF
        return Cost(self.frac * k)

    def _key(self):
        return (1,) if self.frac is None else (0, self.frac)

    def __lt__(self, other: "Cost") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Cost") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "Cost") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "Cost") -> bool:
        return self._key() >= other._key()

    def __str__(self) -> str:
        return "inf" if self.frac is None else str(self.frac)

    def __repr__(self) -> str:
        return f"Cost({self})"


INF = Cost(None)
ZERO = Cost(Fraction(0))


def _check_domain(domain: Sequence[str]) -> tuple[str, ...]:
    domain = tuple(domain)
    if not domain:
        raise StructureError("domain must be non-empty")
    if len(set(domain)) != len(domain):
        raise StructureError("domain labels must be unique")
    return domain


@dataclass(frozen=True)
class WeightedRelation:
    """A partial map from arity-sized tuples over a domain to finite costs."""

    arity: int
    domain: tuple[str, ...]
    entries: Mapping[tuple[str, ...], Cost]

    def __post_init__(self):
        domain = _check_domain(self.domain)
        object.__setattr__(self, "domain", domain)
        if self.arity < 1:
            raise StructureError("arity must be positive")
        if not self.entries:
            raise StructureError("weighted relation must have a non-empty key set")
        index = {d: i for i, d in enumerate(domain)}
        normalized = {}
        for key, weight in self.entries.items():
            key = tuple(key)
            if len(key) != self.arity:
                raise StructureError(f"tuple {key} has wrong length for arity {self.arity}")
            for label in key:
                if label not in index:
                    raise StructureError(f"label {label!r} not in domain")
            weight = Cost.of(weight)
            if not weight.is_finite:
                raise StructureError("stored weights must be finite")
            normalized[key] = weight
        # canonical order: lexicographic in domain declaration order
        ordered = dict(sorted(normalized.items(), key=lambda kv: tuple(index[x] for x in kv[0])))
        object.__setattr__(self, "entries", ordered)

    def tuples(self) -> tuple[tuple[str, ...], ...]:
        """The underlying relation in canonical order."""
        return tuple(self.entries)

    def weight(self, key: tuple[str, ...]) -> Cost | None:
        return self.entries.get(tuple(key))

    def min_weight(self) -> Cost:
        return min(self.entries.values())

    def zeroed(self) -> "WeightedRelation":
        """The crisp copy: same key set, every weight zero."""
        return WeightedRelation(self.arity, self.domain, {t: ZERO for t in self.entries})


def feas(rho: WeightedRelation) -> tuple[tuple[str, ...], ...]:
    """The feasibility relation of a weighted relation: its key set."""
    return rho.tuples()


@dataclass(frozen=True)
class WeightedStructure:
    """A domain together with uniquely named weighted relations."""

    domain: tuple[str, ...]
    relations: Mapping[str, WeightedRelation]

    def __post_init__(self):
        domain = _check_domain(self.domain)
        object.__setattr__(self, "domain", domain)
        if not isinstance(self.relations, dict):
            object.__setattr__(self, "relations", dict(self.relations))
        for name, rho in self.relations.items():
            if not name:
                raise StructureError("relation names must be non-empty")
            if rho.domain != domain:
                raise StructureError(f"relation {name!r} declared over a different domain")

    def relation(self, name: str) -> WeightedRelation:
        try:
            return self.relations[name]
        except KeyError:
            raise StructureError(f"unknown relation {name!r}") from None


@dataclass(frozen=True)
class Constraint:
    relation: str
    scope: tuple[str, ...]
    weight: Cost

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        weight = Cost.of(self.weight)
        if not weight.is_finite:
            raise StructureError("constraint weights must be finite")
        object.__setattr__(self, "weight", weight)


@dataclass(frozen=True)
class VCSPInstance:
    """An ordered list of variables plus weighted constraints over them."""

    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise StructureError("variables must be unique")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        known = set(variables)
        for c in self.constraints:
            for v in c.scope:
                if v not in known:
                    raise StructureError(f"constraint scope uses undeclared variable {v!r}")


def validate_instance(inst: VCSPInstance, structure: WeightedStructure) -> None:
    """Check that an instance is structurally compatible with a structure."""
    for c in inst.constraints:
        rho = structure.relation(c.relation)
        if len(c.scope) != rho.arity:
            raise StructureError(
                f"constraint on {c.relation!r} has scope length {len(c.scope)}, "
                f"expected arity {rho.arity}"
            )


def eval_instance(inst: VCSPInstance, structure: WeightedStructure,
                  assignment: Mapping[str, str]) -> Cost:
    """Evaluate the weighted sum of an instance under a total assignment.

    A scope whose image tuple is absent from its relation contributes the
    infinite cost; zero-weight constraints still enforce feasibility.
    Malformed inputs raise :class:`StructureError` rather than returning
    infinity.
    """
    validate_instance(inst, structure)
    labels = set(structure.domain)
    for v in inst.variables:
        if v not in assignment:
            raise StructureError(f"assignment is missing variable {v!r}")
        if assignment[v] not in labels:
            raise StructureError(f"assignment maps {v!r} outside the domain")
    total = ZERO
    for c in inst.constraints:
        rho = structure.relations[c.relation]
        image = tuple(assignment[v] for v in c.scope)
        value = rho.entries.get(image)
        if value is None:
            return INF
        total = total + value.scale(c.weight.as_fraction())
    return total


def direct_product(rhos: Sequence[WeightedRelation]) -> WeightedRelation:
    """The direct product: concatenated key tuples with summed weights.

    Coordinate blocks are ordered as the input list.
    """
    rhos = list(rhos)
    if not rhos:
        raise StructureError("direct product of an empty list")
    domain = rhos[0].domain
    for rho in rhos[1:]:
        if rho.domain != domain:
            raise StructureError("direct product requires a shared domain")
    entries = {}
    for combo in itertools.product(*(rho.tuples() for rho in rhos)):
        key = tuple(itertools.chain.from_iterable(combo))
        weight = sum((rho.entries[t] for rho, t in zip(rhos, combo)), ZERO)
        entries[key] = weight
    return WeightedRelation(sum(r.arity for r in rhos), domain, entries)


@dataclass(frozen=True)
class ScopeBlock:
    """Which coordinate block of the collapsed relation an original relation owns."""

    relation: str
    start: int
    arity: int


def collapse_to_single_relation(
    structure: WeightedStructure,
) -> tuple[WeightedStructure, tuple[ScopeBlock, ...]]:
    """Replace all relations by their direct product, in declared order."""
    if not structure.relations:
        raise StructureError("structure has no relations")
    names = list(structure.relations)
    if len(names) == 1:
        name = names[0]
        return structure, (ScopeBlock(name, 0, structure.relations[name].arity),)
    blocks = []
    start = 0
    for name in names:
        arity = structure.relations[name].arity
        blocks.append(ScopeBlock(name, start, arity))
        start += arity
    product = direct_product([structure.relations[n] for n in names])
    merged = WeightedStructure(structure.domain, {"*".join(names): product})
    return merged, tuple(blocks)


def rewrite_over_collapsed(
    inst: VCSPInstance,
    structure: WeightedStructure,
    collapsed: WeightedStructure,
    blocks: Sequence[ScopeBlock],
) -> tuple[VCSPInstance, Cost]:
    """Rewrite an instance over the collapsed structure.

    Each original constraint becomes one constraint on the product relation:
    its own scope fills its block and fresh padding variables fill the other
    blocks.  Padding blocks cannot cost less than the minimum weight of their
    relation, so the rewrite returns that unavoidable remainder as an explicit
    additive offset; every original assignment, extended with padding at
    minimum-weight tuples, evaluates to its original cost plus the offset.
    """
    validate_instance(inst, structure)
    (product_name,) = collapsed.relations
    block_by_relation = {b.relation: b for b in blocks}
    mins = {name: structure.relations[name].min_weight() for name in structure.relations}
    variables = list(inst.variables)
    constraints = []
    offset = ZERO
    pad = 0
    for c in inst.constraints:
        own = block_by_relation[c.relation]
        scope: list[str] = []
        for b in blocks:
            if b.relation == c.relation and b.start == own.start:
                scope.extend(c.scope)
                continue
            for _ in range(b.arity):
                name = f"pad:{pad}"
                pad += 1
                variables.append(name)
                scope.append(name)
            offset = offset + mins[b.relation].scale(c.weight.as_fraction())
        constraints.append(Constraint(product_name, tuple(scope), c.weight))
    return VCSPInstance(tuple(variables), tuple(constraints)), offset
