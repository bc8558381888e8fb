"""The two reductions between valued instances and digraph cost homomorphisms.

Forward: every variable gets a fresh all-zigzag path whose initial vertex it
becomes, and every constraint a fan of single-edge-marked paths glued from
its variables onto a fresh weighted apex.  Feasible homomorphisms of the
gadget graph correspond exactly to finite-cost assignments, with equal cost.

Backward: stage 1 levels the input and prunes weights that can never reach
the top level, stage 2 eliminates components of deficient height by solving
them outright against the encoding's maximal fans, stage 3a compiles the
surviving structure into tuples of vertex sets with equality bookkeeping,
and stage 3b quotients by the equality graph to emit an instance over the
source structure extended with its zero-weighted copy.  The minimal subsets
driving stage 3a are computed on attachment-anchored components: a
component's vertices that receive edges from base vertices are pinned beside
the path's initial vertex and those that reach top vertices beside its
terminal vertex, which is exactly the freedom a homomorphism of the whole
graph leaves them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .costs import (
    Cost,
    INF,
    ZERO,
    Constraint,
    VCSPInstance,
    WeightedRelation,
    WeightedStructure,
    validate_instance,
)
from .digraphs import (
    Digraph,
    FanOptimum,
    Infeasible,
    InternalComponent,
    LeveledDigraph,
    NoOptimisationImpact,
    build_q_path,
    compute_levels,
    fan_min_cost,
    gamma,
    internal_components,
)
from .encoding import EncodedDigraph, base_name, tuple_name
from .errors import NotBalancedError, NotSatisfiableAnywhereError, StructureError


@dataclass(frozen=True)
class MinCostHomInstance:
    """An input digraph plus a sparse unary weight map over its vertices.

    A vertex absent from the map carries weight zero (the zero multiple of
    the target's unary function is applied to it).
    """

    graph: Digraph
    weights: Mapping[str, Cost]

    def __post_init__(self):
        known = set(self.graph.vertices)
        normalized: dict[str, Cost] = {}
        for v, w in self.weights.items():
            if v not in known:
                raise StructureError(f"weight on unknown vertex {v!r}")
            w = Cost.of(w)
            if not w.is_finite:
                raise StructureError("vertex weights must be finite")
            normalized[v] = w
        object.__setattr__(self, "weights", normalized)


# ---------------------------------------------------------------------------
# Forward direction


def forward_reduce(inst: VCSPInstance, enc: EncodedDigraph) -> MinCostHomInstance:
    """Compile a single-relation instance into a gadget graph plus weights."""
    structure = WeightedStructure(
        enc.domain,
        {enc.relation_name: WeightedRelation(
            enc.n, enc.domain, {r: enc.u_support[tuple_name(r)] for r in enc.tuples}
        )},
    )
    validate_instance(inst, structure)
    n = enc.n
    vertices: dict[str, None] = {}
    edges: set[tuple[str, str]] = set()
    weights: dict[str, Cost] = {}

    def add_path(path, mapping):
        renamed = path.relabel(mapping)
        for v in renamed.names:
            vertices.setdefault(v)
        edges.update(renamed.edges)

    q_empty = build_q_path(n, frozenset())
    for x in inst.variables:
        mapping = {q_empty.iota: f"v:{x}"}
        mapping.update({v: f"v:{x}:{v}" for v in q_empty.names[1:]})
        add_path(q_empty, mapping)
    for idx, c in enumerate(inst.constraints):
        apex = f"c{idx}:y"
        for i, x in enumerate(c.scope, start=1):
            q = build_q_path(n, frozenset({i}))
            mapping = {q.iota: f"v:{x}", q.tau: apex}
            mapping.update({v: f"c{idx}:p{i}:{v}" for v in q.names[1:-1]})
            add_path(q, mapping)
        weights[apex] = c.weight
    return MinCostHomInstance(Digraph(tuple(vertices), frozenset(edges)), weights)


# ---------------------------------------------------------------------------
# Backward direction


@dataclass(frozen=True)
class FixedNo:
    """The canonical unsatisfiable outcome."""

    reason: str
    detail: str = ""


@dataclass(frozen=True)
class FixedYes:
    """The canonical trivially satisfiable outcome plus its accumulated cost."""

    offset: Cost


@dataclass(frozen=True)
class TaggedTuple:
    """One tuple of vertex sets; top tuples carry their vertex as subscript."""

    subscript: str | None
    origin: str
    sets: tuple[frozenset[str], ...]


@dataclass(frozen=True)
class BPrime:
    """Tuples of vertex sets plus equality bookkeeping from stage 3a."""

    top_tuples: tuple[TaggedTuple, ...]
    base_tuples: tuple[TaggedTuple, ...]
    top_equalities: tuple[tuple[str, str], ...]
    base_equalities: tuple[tuple[str, str], ...]
    fresh: tuple[str, ...]
    bases: tuple[str, ...] = ()  # all level-0 vertices of the compiled graph

    def all_tuples(self) -> tuple[TaggedTuple, ...]:
        return self.top_tuples + self.base_tuples


@dataclass(frozen=True)
class ReducedVCSP:
    """The emitted instance over the structure plus its zero-weighted copy."""

    instance: VCSPInstance
    structure: WeightedStructure
    variable_classes: tuple[tuple[str, ...], ...]
    offset: Cost
    rho_name: str
    rho0_name: str
    dropped_tuples: tuple[tuple[str, ...], ...] = ()


def stage1_check(
    m_inst: MinCostHomInstance, enc: EncodedDigraph
) -> FixedNo | tuple[LeveledDigraph, dict[str, Cost]]:
    """Level the input, reject impossible heights, prune unreachable weights.

    A weight entry survives only if its vertex sits at the top level of its
    own component: no other vertex can ever reach the encoding's top level,
    where the unary support lives.
    """
    try:
        leveled = compute_levels(m_inst.graph)
    except NotBalancedError as exc:
        return FixedNo("not-balanced", str(exc))
    if leveled.height > enc.height:
        return FixedNo(
            "height-exceeded", f"input height {leveled.height} > {enc.height}"
        )
    pruned = {
        v: w
        for v, w in m_inst.weights.items()
        if leveled.lvl[v] == leveled.component_of(v).height
    }
    return leveled, pruned


def stage2_short_components(
    leveled: LeveledDigraph,
    weights: Mapping[str, Cost],
    enc: EncodedDigraph,
) -> FixedNo | tuple[LeveledDigraph | None, Cost]:
    """Solve and remove every component of height below the encoding's.

    Each short component is optimized against every maximal fan of the
    encoding; its optimal cost joins the additive offset.  Returns the
    levelled remainder (None when everything was short) plus the offset.
    """
    fans = enc.maximal_fans()
    u_by_fan = [enc.u_on(f.graph.vertices) for f in fans]
    offset = ZERO
    survivors: list[str] = []
    for comp in leveled.components:
        if comp.height == enc.height:
            survivors.extend(comp.vertices)
            continue
        sub = leveled.graph.induced(comp.vertices)
        lvl = {v: leveled.lvl[v] for v in comp.vertices}
        w = {v: weights[v] for v in comp.vertices if v in weights}
        best: Cost | None = None
        for fan, u_fan in zip(fans, u_by_fan):
            result = fan_min_cost(sub, lvl, w, fan, u_fan)
            if isinstance(result, Infeasible):
                continue
            cost = ZERO if isinstance(result, NoOptimisationImpact) else result.cost
            if best is None or cost < best:
                best = cost
            if best == ZERO:
                break
        if best is None:
            return FixedNo("short-component-infeasible", f"component at {comp.vertices[0]!r}")
        offset = offset + best
    if not survivors:
        return None, offset
    remaining = leveled.graph.induced(survivors)
    return compute_levels(remaining), offset


def _anchored_gamma(comp: InternalComponent, n: int) -> frozenset[int]:
    """Minimal path subset for a component, anchored by its attachments."""
    entry_pins = tuple(dict.fromkeys(v for _, v in comp.bottom_attach))
    exit_pins = tuple(dict.fromkeys(v for v, _ in comp.top_attach))
    return gamma(comp.graph, comp.lvl, n, pin_entry=entry_pins, pin_exit=exit_pins)


def stage3a_build_bprime(
    leveled: LeveledDigraph, enc: EncodedDigraph
) -> FixedNo | BPrime:
    """Compile the full-height remainder into tuples of vertex sets.

    Top loop: one subscripted tuple per top vertex whose i-th set collects,
    over attached components requiring coordinate i, their base attachments
    (or one shared fresh vertex per base-less component, tying all of that
    component's coordinates together).  Base loop: one tuple per
    (base vertex, attached top-free component): the base itself at required
    coordinates and fresh vertices elsewhere.  Equalities record components
    spanning two top or two base vertices.
    """
    n = enc.n
    comps = internal_components(leveled)
    gammas: list[frozenset[int]] = []
    for comp in comps:
        try:
            gammas.append(_anchored_gamma(comp, n))
        except NotSatisfiableAnywhereError:
            return FixedNo(
                "internal-component-unsatisfiable",
                f"component at {comp.graph.vertices[0]!r}",
            )
    fresh: list[str] = []

    def new_fresh() -> str:
        name = f"new:{len(fresh)}"
        fresh.append(name)
        return name

    shared_fresh: dict[int, str] = {}  # per component without base attachments

    def component_fresh(idx: int) -> str:
        if idx not in shared_fresh:
            shared_fresh[idx] = new_fresh()
        return shared_fresh[idx]

    tops = [v for v in leveled.graph.vertices if leveled.lvl[v] == leveled.height]
    bases = [v for v in leveled.graph.vertices if leveled.lvl[v] == 0]

    top_tuples = []
    for e in tops:
        sets: list[frozenset[str]] = []
        for i in range(1, n + 1):
            attached = [
                idx
                for idx, comp in enumerate(comps)
                if i in gammas[idx] and e in comp.top_vertices()
            ]
            if not attached:
                sets.append(frozenset({new_fresh()}))
                continue
            members: set[str] = set()
            for idx in attached:
                bottoms = comps[idx].bottom_vertices()
                if bottoms:
                    members.update(bottoms)
                else:
                    members.add(component_fresh(idx))
            sets.append(frozenset(members))
        top_tuples.append(TaggedTuple(e, e, tuple(sets)))

    base_tuples = []
    for b in bases:
        for idx, comp in enumerate(comps):
            if b not in comp.bottom_vertices() or comp.top_vertices():
                continue
            sets = tuple(
                frozenset({b}) if i in gammas[idx] else frozenset({new_fresh()})
                for i in range(1, n + 1)
            )
            base_tuples.append(TaggedTuple(None, b, sets))

    top_eq = []
    base_eq = []
    for comp in comps:
        comp_tops = comp.top_vertices()
        for a, b in zip(comp_tops, comp_tops[1:]):
            top_eq.append((a, b))
        comp_bottoms = comp.bottom_vertices()
        for a, b in zip(comp_bottoms, comp_bottoms[1:]):
            base_eq.append((a, b))

    return BPrime(
        tuple(top_tuples),
        tuple(base_tuples),
        tuple(top_eq),
        tuple(base_eq),
        tuple(fresh),
        tuple(bases),
    )


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def stage3b_build_instance(
    bprime: BPrime,
    weights: Mapping[str, Cost],
    enc: EncodedDigraph,
    offset: Cost = ZERO,
) -> ReducedVCSP:
    """Quotient the tuples by the equality graph and emit the instance.

    Variables are the equality-graph components.  Every surviving quotient
    tuple yields a zero-weight crisp constraint on the zero-weighted copy;
    tuples matching a weighted top vertex's (quotiented) tuple additionally
    carry the summed weight on the original relation.  A tuple is discarded
    only when all its classes are fresh-only, it carries no weight, and some
    relation tuple realizes its class pattern.
    """
    vertices = list(dict.fromkeys(
        list(bprime.bases)
        + [v for t in bprime.all_tuples() for s in t.sets for v in s]
    ))
    uf = _UnionFind(vertices)
    for t in bprime.all_tuples():
        for s in t.sets:
            members = sorted(s)
            for a, b in zip(members, members[1:]):
                uf.union(a, b)
    for a, b in bprime.base_equalities:
        uf.union(a, b)
    by_subscript = {t.subscript: t for t in bprime.top_tuples}
    for e, f in bprime.top_equalities:
        te, tf = by_subscript[e], by_subscript[f]
        for se, sf in zip(te.sets, tf.sets):
            uf.union(next(iter(sorted(se))), next(iter(sorted(sf))))

    fresh_set = set(bprime.fresh)
    members_by_root: dict[str, list[str]] = {}
    for v in vertices:
        members_by_root.setdefault(uf.find(v), []).append(v)
    classes = sorted((tuple(sorted(ms)) for ms in members_by_root.values()))
    class_index = {m: i for i, cls in enumerate(classes) for m in cls}
    names = tuple(f"X{i}" for i in range(len(classes)))
    all_fresh_class = [all(m in fresh_set for m in cls) for cls in classes]

    quotient: dict[tuple[int, ...], Cost] = {}
    order: list[tuple[int, ...]] = []
    for t in bprime.all_tuples():
        key = tuple(class_index[next(iter(sorted(s)))] for s in t.sets)
        for s, cls_idx in zip(t.sets, key):
            if any(class_index[m] != cls_idx for m in s):
                raise StructureError("vertex set split across equality classes")
        if key not in quotient:
            quotient[key] = ZERO
            order.append(key)
        if t.subscript is not None and t.subscript in weights:
            quotient[key] = quotient[key] + weights[t.subscript]

    def pattern_satisfiable(key: tuple[int, ...]) -> bool:
        for r in enc.tuples:
            values: dict[int, str] = {}
            ok = True
            for cls_idx, comp in zip(key, r):
                if values.setdefault(cls_idx, comp) != comp:
                    ok = False
                    break
            if ok:
                return True
        return False

    rho_name = enc.relation_name
    rho0_name = rho_name + "0"
    dropped = []
    constraints = []
    for key in sorted(order):
        scope = tuple(names[i] for i in key)
        weight = quotient[key]
        weighted = _carries_subscript(bprime, weights, key, class_index)
        if (
            all(all_fresh_class[i] for i in key)
            and not weighted
            and pattern_satisfiable(key)
        ):
            dropped.append(scope)
            continue
        constraints.append(Constraint(rho0_name, scope, ZERO))
        if weighted:
            constraints.append(Constraint(rho_name, scope, weight))

    rho = WeightedRelation(
        enc.n, enc.domain, {r: enc.u_support[tuple_name(r)] for r in enc.tuples}
    )
    structure = WeightedStructure(enc.domain, {rho_name: rho, rho0_name: rho.zeroed()})
    instance = VCSPInstance(names, tuple(constraints))
    return ReducedVCSP(
        instance,
        structure,
        tuple(classes),
        offset,
        rho_name,
        rho0_name,
        tuple(dropped),
    )


def _carries_subscript(
    bprime: BPrime,
    weights: Mapping[str, Cost],
    key: tuple[int, ...],
    class_index: Mapping[str, int],
) -> bool:
    """Whether some weighted top vertex quotients onto this tuple."""
    for t in bprime.top_tuples:
        if t.subscript not in weights:
            continue
        if tuple(class_index[next(iter(sorted(s)))] for s in t.sets) == key:
            return True
    return False


def backward_reduce(
    m_inst: MinCostHomInstance, enc: EncodedDigraph
) -> ReducedVCSP | FixedNo | FixedYes:
    """Run stages 1, 2, 3a and 3b in order."""
    staged = stage1_check(m_inst, enc)
    if isinstance(staged, FixedNo):
        return staged
    leveled, weights = staged
    if not m_inst.graph.vertices:
        return FixedYes(ZERO)
    shortened = stage2_short_components(leveled, weights, enc)
    if isinstance(shortened, FixedNo):
        return shortened
    remaining, offset = shortened
    if remaining is None:
        return FixedYes(offset)
    bprime = stage3a_build_bprime(remaining, enc)
    if isinstance(bprime, FixedNo):
        return bprime
    return stage3b_build_instance(bprime, weights, enc, offset)
