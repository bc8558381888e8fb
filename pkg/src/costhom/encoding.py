"""Building the target digraph and its unary cost function from a relation.

Starting from the bipartite sketch with the domain on one side and the
relation's tuples on the other, every sketch edge (d, r) is replaced by the
bracketed path whose single-edge blocks sit exactly at the coordinates where
d equals the corresponding component of r.  The unary function charges each
tuple vertex its weight and everything else zero.

Vertex names are canonical and carry their provenance: ``b:<d>`` for base
vertices, ``t:<r1,...,rn>`` for tuple vertices, and
``p:<d>|<r1,...,rn>|<block>|<k>`` for path interior vertices counted from the
initial side.  Downstream stages (the vertex order, DOT output, fan
extraction) resolve paths through these names.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .costs import Cost, ZERO, WeightedRelation, WeightedStructure
from .digraphs import (
    Digraph,
    Fan,
    LeveledDigraph,
    OrientedPath,
    build_q_path,
    compute_levels,
)
from .errors import BiconditionalViolationError, SizeGuardError, StructureError
from .oracles import SearchBudget, DEFAULT_BUDGET, iter_homomorphisms


@dataclass(frozen=True)
class VertexRole:
    kind: str  # "base" | "tuple" | "path"
    d: str | None = None
    r: tuple[str, ...] | None = None
    block: int | None = None
    k: int | None = None


def tuple_label(r: tuple[str, ...]) -> str:
    return ",".join(r)


def base_name(d: str) -> str:
    return f"b:{d}"


def tuple_name(r: tuple[str, ...]) -> str:
    return f"t:{tuple_label(r)}"


@dataclass(frozen=True)
class EncodedDigraph:
    """The levelled target digraph with role tags, unary costs and path data."""

    relation_name: str
    domain: tuple[str, ...]
    tuples: tuple[tuple[str, ...], ...]
    n: int
    graph: Digraph
    lvl: Mapping[str, int]
    roles: Mapping[str, VertexRole]
    u_support: Mapping[str, Cost]
    paths: Mapping[tuple[str, tuple[str, ...]], tuple[str, ...]]

    @property
    def height(self) -> int:
        return self.n + 2

    def u(self, v: str) -> Cost:
        return self.u_support.get(v, ZERO)

    def base_vertices(self) -> tuple[str, ...]:
        return tuple(base_name(d) for d in self.domain)

    def tuple_vertices(self) -> tuple[str, ...]:
        return tuple(tuple_name(r) for r in self.tuples)

    def subset_for(self, d: str, r: tuple[str, ...]) -> frozenset[int]:
        return frozenset(i + 1 for i, comp in enumerate(r) if comp == d)

    def path_object(self, d: str, r: tuple[str, ...]) -> OrientedPath:
        """The realized path from base d to tuple r, with encoding names."""
        q = build_q_path(self.n, self.subset_for(d, r))
        names = self.paths[(d, r)]
        return q.relabel(dict(zip(q.names, names)))

    def leveled(self) -> LeveledDigraph:
        return compute_levels(self.graph)

    def maximal_fans(self) -> tuple[Fan, ...]:
        """Every base-rooted initial fan and tuple-rooted terminal fan."""
        fans = []
        for d in self.domain:
            paths = tuple(self.path_object(d, r) for r in self.tuples)
            fans.append(self._fan(paths, base_name(d), "initial"))
        for r in self.tuples:
            paths = tuple(self.path_object(d, r) for d in self.domain)
            fans.append(self._fan(paths, tuple_name(r), "terminal"))
        return tuple(fans)

    def _fan(self, paths: tuple[OrientedPath, ...], apex: str, kind: str) -> Fan:
        vertices: dict[str, None] = {}
        edges: set[tuple[str, str]] = set()
        lvl: dict[str, int] = {}
        for p in paths:
            for v in p.names:
                vertices.setdefault(v)
                lvl[v] = p.lvl[v]
            edges |= p.edges
        return Fan(paths, apex, kind, Digraph(tuple(vertices), frozenset(edges)), lvl)

    def u_on(self, vertices: Iterable[str]) -> dict[str, Cost]:
        return {v: self.u_support[v] for v in vertices if v in self.u_support}


def build_encoding(rho: WeightedRelation, relation_name: str = "rho") -> EncodedDigraph:
    """Encode a single weighted relation as a digraph plus unary costs."""
    n = rho.arity
    domain = rho.domain
    tuples = rho.tuples()
    vertices: list[str] = [base_name(d) for d in domain]
    vertices += [tuple_name(r) for r in tuples]
    roles: dict[str, VertexRole] = {}
    lvl: dict[str, int] = {}
    for d in domain:
        roles[base_name(d)] = VertexRole("base", d=d)
        lvl[base_name(d)] = 0
    for r in tuples:
        roles[tuple_name(r)] = VertexRole("tuple", r=r)
        lvl[tuple_name(r)] = n + 2
    edges: set[tuple[str, str]] = set()
    paths: dict[tuple[str, tuple[str, ...]], tuple[str, ...]] = {}
    for d in domain:
        for r in tuples:
            subset = frozenset(i + 1 for i, comp in enumerate(r) if comp == d)
            q = build_q_path(n, subset)
            mapping = {q.iota: base_name(d), q.tau: tuple_name(r)}
            for name in q.names[1:-1]:
                block, k = name[1:].split("/")
                new = f"p:{d}|{tuple_label(r)}|{block}|{k}"
                mapping[name] = new
                vertices.append(new)
                roles[new] = VertexRole("path", d=d, r=r, block=int(block), k=int(k))
                lvl[new] = q.lvl[name]
            renamed = q.relabel(mapping)
            edges |= renamed.edges
            paths[(d, r)] = renamed.names
    graph = Digraph(tuple(vertices), frozenset(edges))
    u_support = {tuple_name(r): rho.entries[r] for r in tuples}
    return EncodedDigraph(
        relation_name, domain, tuples, n, graph, lvl, roles, u_support, paths
    )


def expected_vertex_count(n: int, r: int, d: int) -> int:
    return (3 * n + 1) * r * d + (1 - 2 * n) * r + d


def expected_edge_count(n: int, r: int, d: int) -> int:
    return (3 * n + 2) * r * d - 2 * n * r


@dataclass(frozen=True)
class EncodingViolation:
    check: str
    witness: str


def verify_encoding(
    enc: EncodedDigraph,
    rho: WeightedRelation | None = None,
    check_rigidity: bool = True,
    rigidity_vertex_cap: int = 60,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> EncodingViolation | None:
    """Re-check every structural invariant of an encoding; None when clean.

    With ``check_rigidity`` and a small enough graph, also re-derives the
    rigidity biconditional between the source relation and the encoding by
    exhaustive unary-polymorphism enumeration on both sides.
    """
    n, d, r = enc.n, len(enc.domain), len(enc.tuples)
    graph = enc.graph
    if len(graph.vertices) != expected_vertex_count(n, r, d):
        return EncodingViolation(
            "vertex-count",
            f"{len(graph.vertices)} != {expected_vertex_count(n, r, d)}",
        )
    if len(graph.edges) != expected_edge_count(n, r, d):
        return EncodingViolation(
            "edge-count", f"{len(graph.edges)} != {expected_edge_count(n, r, d)}"
        )
    try:
        leveled = compute_levels(graph)
    except Exception as exc:  # NotBalancedError
        return EncodingViolation("balance", str(exc))
    if leveled.height != n + 2:
        return EncodingViolation("height", f"{leveled.height} != {n + 2}")
    if len(leveled.components) != 1:
        return EncodingViolation("connectivity", f"{len(leveled.components)} components")
    for v in graph.vertices:
        if leveled.lvl[v] != enc.lvl[v]:
            return EncodingViolation("levels", f"stored level of {v} disagrees")
    bases = {v for v, role in enc.roles.items() if role.kind == "base"}
    tops = {v for v, role in enc.roles.items() if role.kind == "tuple"}
    if bases != {v for v in graph.vertices if enc.lvl[v] == 0}:
        return EncodingViolation("base-level", "level-0 vertex set is not the domain")
    if tops != {v for v in graph.vertices if enc.lvl[v] == n + 2}:
        return EncodingViolation("top-level", "top-level vertex set is not the relation")
    # per-edge path shape: the realized paths partition the edges
    seen_edges: set[tuple[str, str]] = set()
    interiors: set[str] = set()
    for d_label in enc.domain:
        for r_tuple in enc.tuples:
            path = enc.path_object(d_label, r_tuple)
            expected = build_q_path(n, enc.subset_for(d_label, r_tuple))
            if len(path.names) != len(expected.names):
                return EncodingViolation(
                    "path-shape", f"path ({d_label}, {r_tuple}) has wrong length"
                )
            for v, w in zip(path.names, expected.names):
                if path.lvl[v] != expected.lvl[w]:
                    return EncodingViolation(
                        "path-shape", f"path ({d_label}, {r_tuple}) level mismatch at {v}"
                    )
            for e in path.edges:
                if e not in graph.edges:
                    return EncodingViolation("path-shape", f"missing edge {e}")
            inner = set(path.names[1:-1])
            if inner & interiors:
                return EncodingViolation(
                    "path-disjointness", f"paths share interior vertices {inner & interiors}"
                )
            interiors |= inner
            seen_edges |= path.edges
    if seen_edges != set(graph.edges):
        return EncodingViolation("edge-cover", "graph has edges outside the realized paths")
    support = set(enc.u_support)
    if support != tops:
        return EncodingViolation("u-support", f"support {support ^ tops} off the top level")
    if rho is not None:
        for r_tuple in enc.tuples:
            if enc.u_support[tuple_name(r_tuple)] != rho.entries[r_tuple]:
                return EncodingViolation("u-values", f"u({r_tuple}) disagrees with the relation")
    if check_rigidity and rho is not None and len(graph.vertices) <= rigidity_vertex_cap:
        try:
            is_rigid_core_pair(rho, enc, budget=budget)
        except BiconditionalViolationError as exc:
            return EncodingViolation("rigidity-biconditional", str(exc))
    return None


def _relation_unary_maps(rho: WeightedRelation) -> list[dict[str, str]]:
    keys = set(rho.tuples())
    maps = []
    for values in itertools.product(rho.domain, repeat=len(rho.domain)):
        f = dict(zip(rho.domain, values))
        if all(tuple(f[x] for x in t) in keys for t in keys):
            maps.append(f)
    return maps


def is_rigid_core_pair(
    rho: WeightedRelation,
    enc: EncodedDigraph,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> tuple[bool, bool, dict[str, str] | None]:
    """Rigidity of the relation and of its encoding, derived independently.

    Returns ``(rigid_source, rigid_encoding, witness)`` where the witness is
    a non-identity unary polymorphism of whichever side has one.  The two
    booleans must agree; disagreement raises
    :class:`BiconditionalViolationError`.
    """
    if len(rho.domain) ** len(rho.domain) > budget.max_assignments:
        raise SizeGuardError("unary enumeration over the domain exceeds the budget")
    source_maps = _relation_unary_maps(rho)
    rigid_source = all(all(f[x] == x for x in rho.domain) for f in source_maps)

    leveled = enc.leveled()
    non_identity: dict[str, str] | None = None
    for h in iter_homomorphisms(
        enc.graph, enc.graph, budget=budget, x_lvl=leveled.lvl, a_lvl=leveled.lvl
    ):
        if any(h[v] != v for v in enc.graph.vertices):
            non_identity = h
            break
    rigid_encoding = non_identity is None

    if rigid_source != rigid_encoding:
        raise BiconditionalViolationError(
            f"rigidity disagrees: source {rigid_source}, encoding {rigid_encoding}"
        )
    witness: dict[str, str] | None = non_identity
    if witness is None and not rigid_source:
        witness = next(f for f in source_maps if any(f[x] != x for x in rho.domain))
    return rigid_source, rigid_encoding, witness
