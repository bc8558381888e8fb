"""Digraphs, balance levelling, zigzag paths, and polynomial path solvers.

The path family here is the height-(n+2) oriented path with a single edge at
block l exactly when l is in the chosen subset, a zigzag elsewhere, and a
single edge bracketing each end.  Satisfiability of a connected balanced
digraph inside such a path is decided by level-restricted arc consistency:
the target path's edge relation is closed under the componentwise
position-minimum, so a fixpoint with non-empty domains always extracts the
pointwise leftmost homomorphism.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .costs import Cost, ZERO
from .errors import (
    MonotonicityViolationError,
    NotBalancedError,
    NotSatisfiableAnywhereError,
    PolymorphismCheckError,
    StructureError,
)


@dataclass(frozen=True)
class Digraph:
    """Vertices in declaration order plus a set of directed edges."""

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise StructureError("vertices must be unique")
        object.__setattr__(self, "vertices", vertices)
        edges = frozenset((a, b) for a, b in self.edges)
        known = set(vertices)
        for a, b in edges:
            if a not in known or b not in known:
                raise StructureError(f"edge ({a!r}, {b!r}) uses an unknown vertex")
        object.__setattr__(self, "edges", edges)
        index = {v: i for i, v in enumerate(vertices)}
        out: dict[str, list[str]] = {v: [] for v in vertices}
        inc: dict[str, list[str]] = {v: [] for v in vertices}
        for a, b in sorted(edges, key=lambda e: (index[e[0]], index[e[1]])):
            out[a].append(b)
            inc[b].append(a)
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_in", inc)
        object.__setattr__(self, "_index", index)

    def out_neighbors(self, v: str) -> list[str]:
        return self._out[v]

    def in_neighbors(self, v: str) -> list[str]:
        return self._in[v]

    def index(self, v: str) -> int:
        return self._index[v]

    def induced(self, keep: Iterable[str]) -> "Digraph":
        keep_set = set(keep)
        vertices = tuple(v for v in self.vertices if v in keep_set)
        edges = frozenset((a, b) for a, b in self.edges if a in keep_set and b in keep_set)
        return Digraph(vertices, edges)


@dataclass(frozen=True)
class Component:
    vertices: tuple[str, ...]
    height: int


@dataclass(frozen=True)
class LeveledDigraph:
    """A digraph with its unique level function, normalized per component.

    Every edge rises exactly one level and each weakly connected component's
    minimum level is zero, so the whole graph's minimum level is zero.
    """

    graph: Digraph
    lvl: Mapping[str, int]
    height: int
    components: tuple[Component, ...]

    def component_of(self, v: str) -> Component:
        return self._comp_of[v]

    def __post_init__(self):
        comp_of = {}
        for comp in self.components:
            for v in comp.vertices:
                comp_of[v] = comp
        object.__setattr__(self, "_comp_of", comp_of)

    def level_profile(self) -> list[int]:
        counts = [0] * (self.height + 1)
        for v in self.graph.vertices:
            counts[self.lvl[v]] += 1
        return counts


def compute_levels(graph: Digraph) -> LeveledDigraph:
    """Assign the level function, or raise with a nonzero-length closed walk."""
    raw: dict[str, int] = {}
    parent: dict[str, tuple[str, int] | None] = {}
    components = []

    def walk_to_root(v: str) -> list[str]:
        path = [v]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]][0])
        return path

    for root in graph.vertices:
        if root in raw:
            continue
        raw[root] = 0
        parent[root] = None
        members = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, delta in itertools.chain(
                ((y, 1) for y in graph.out_neighbors(x)),
                ((y, -1) for y in graph.in_neighbors(x)),
            ):
                want = raw[x] + delta
                if y not in raw:
                    raw[y] = want
                    parent[y] = (x, delta)
                    members.append(y)
                    queue.append(y)
                elif raw[y] != want:
                    # closed walk root..x, the offending edge, then y..root;
                    # its net length is the level discrepancy
                    walk = list(reversed(walk_to_root(x))) + walk_to_root(y)
                    raise NotBalancedError(
                        f"digraph is not balanced: closed walk through ({x!r}, {y!r}) "
                        f"has net length {want - raw[y]}",
                        walk=walk,
                        net_length=want - raw[y],
                    )
        base = min(raw[v] for v in members)
        for v in members:
            raw[v] -= base
        height = max(raw[v] for v in members)
        ordered = tuple(sorted(members, key=graph.index))
        components.append(Component(ordered, height))

    height = max((raw[v] for v in graph.vertices), default=0)
    return LeveledDigraph(graph, raw, height, tuple(components))


@dataclass(frozen=True)
class BlockSpan:
    index: int
    start: int  # position of the block's first vertex along the path
    end: int    # position of its last vertex
    single: bool


@dataclass(frozen=True)
class OrientedPath:
    """A realized bracketed path: single edge at block l iff l is in ``subset``.

    Vertices are listed in path order; ``pos`` is the inverse map.  Block 0
    and block n+1 are the bracketing single edges; middle blocks are 1..n.
    Boundary vertices belong to both adjacent blocks' spans.
    """

    n: int
    subset: frozenset[int]
    names: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    lvl: Mapping[str, int]
    blocks: tuple[BlockSpan, ...]

    def __post_init__(self):
        object.__setattr__(self, "pos", {v: i for i, v in enumerate(self.names)})
        out: dict[str, set[str]] = {v: set() for v in self.names}
        inc: dict[str, set[str]] = {v: set() for v in self.names}
        for a, b in self.edges:
            out[a].add(b)
            inc[b].add(a)
        object.__setattr__(self, "out", out)
        object.__setattr__(self, "inc", inc)
        by_level: dict[int, list[str]] = {}
        for v in self.names:
            by_level.setdefault(self.lvl[v], []).append(v)
        for vs in by_level.values():
            vs.sort(key=lambda v: self.pos[v])
        object.__setattr__(self, "by_level", by_level)

    @property
    def iota(self) -> str:
        return self.names[0]

    @property
    def tau(self) -> str:
        return self.names[-1]

    @property
    def height(self) -> int:
        return self.n + 2

    def digraph(self) -> Digraph:
        return Digraph(self.names, self.edges)

    def blocks_of(self, v: str) -> frozenset[int]:
        p = self.pos[v]
        return frozenset(b.index for b in self.blocks if b.start <= p <= b.end)

    def relabel(self, mapping: Mapping[str, str]) -> "OrientedPath":
        """Rename vertices; the mapping must be injective on the path."""
        names = tuple(mapping[v] for v in self.names)
        return OrientedPath(
            self.n,
            self.subset,
            names,
            frozenset((mapping[a], mapping[b]) for a, b in self.edges),
            {mapping[v]: l for v, l in self.lvl.items()},
            self.blocks,
        )


def build_q_path(n: int, subset: Iterable[int]) -> OrientedPath:
    """Construct the bracketed path of height n+2 for a subset of {1..n}."""
    subset = frozenset(subset)
    if not subset <= set(range(1, n + 1)):
        raise StructureError(f"subset {sorted(subset)} not within 1..{n}")
    names = ["q0/0"]
    lvl = {"q0/0": 0}
    edges = set()
    blocks = []
    level = 0
    for block in range(0, n + 2):
        single = block == 0 or block == n + 1 or block in subset
        start = len(names) - 1
        tail = names[-1]
        if single:
            v = f"q{block}/1"
            names.append(v)
            lvl[v] = level + 1
            edges.add((tail, v))
        else:
            a, b, c = f"q{block}/1", f"q{block}/2", f"q{block}/3"
            names.extend([a, b, c])
            lvl[a] = level + 1
            lvl[b] = level
            lvl[c] = level + 1
            edges.update([(tail, a), (b, a), (b, c)])
        level += 1
        blocks.append(BlockSpan(block, start, len(names) - 1, single))
    return OrientedPath(n, subset, tuple(names), frozenset(edges), lvl, tuple(blocks))


@dataclass(frozen=True)
class InternalComponent:
    """A component of the induced subgraph strictly between the outer levels."""

    graph: Digraph
    lvl: Mapping[str, int]  # levels of the ambient graph, not re-normalized
    top_attach: tuple[tuple[str, str], ...]     # (component vertex, top vertex)
    bottom_attach: tuple[tuple[str, str], ...]  # (base vertex, component vertex)

    def top_vertices(self) -> tuple[str, ...]:
        seen = dict.fromkeys(t for _, t in self.top_attach)
        return tuple(seen)

    def bottom_vertices(self) -> tuple[str, ...]:
        seen = dict.fromkeys(b for b, _ in self.bottom_attach)
        return tuple(seen)


def internal_components(leveled: LeveledDigraph) -> tuple[InternalComponent, ...]:
    """Components after deleting every vertex at level 0 or at the top level."""
    m = leveled.height
    keep = [v for v in leveled.graph.vertices if 0 < leveled.lvl[v] < m]
    if not keep:
        return ()
    sub = leveled.graph.induced(keep)
    seen: set[str] = set()
    result = []
    for root in sub.vertices:
        if root in seen:
            continue
        members = [root]
        seen.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in itertools.chain(sub.out_neighbors(x), sub.in_neighbors(x)):
                if y not in seen:
                    seen.add(y)
                    members.append(y)
                    queue.append(y)
        members = sorted(members, key=leveled.graph.index)
        member_set = set(members)
        tops = []
        bottoms = []
        for v in members:
            for w in leveled.graph.out_neighbors(v):
                if leveled.lvl[w] == m and w not in member_set:
                    tops.append((v, w))
            for w in leveled.graph.in_neighbors(v):
                if leveled.lvl[w] == 0 and w not in member_set:
                    bottoms.append((w, v))
        result.append(
            InternalComponent(
                sub.induced(members),
                {v: leveled.lvl[v] for v in members},
                tuple(sorted(tops, key=lambda p: (leveled.graph.index(p[0]), leveled.graph.index(p[1])))),
                tuple(sorted(bottoms, key=lambda p: (leveled.graph.index(p[0]), leveled.graph.index(p[1])))),
            )
        )
    return tuple(result)


def _ac_fixpoint(graph: Digraph, domains: dict[str, set[str]], q: OrientedPath) -> bool:
    """Prune domains to arc consistency over the path target; False on wipeout."""
    arcs = deque(graph.edges)
    pending = set(graph.edges)
    while arcs:
        x, y = arcs.popleft()
        pending.discard((x, y))
        dx, dy = domains[x], domains[y]
        keep_x = {a for a in dx if q.out[a] & dy}
        keep_y = {b for b in dy if q.inc[b] & keep_x}
        changed_x = keep_x != dx
        changed_y = keep_y != dy
        if not keep_x or not keep_y:
            return False
        if changed_x:
            domains[x] = keep_x
            for e in itertools.chain(
                ((z, x) for z in graph.in_neighbors(x)),
                ((x, z) for z in graph.out_neighbors(x)),
            ):
                if e not in pending:
                    pending.add(e)
                    arcs.append(e)
        if changed_y:
            domains[y] = keep_y
            for e in itertools.chain(
                ((z, y) for z in graph.in_neighbors(y)),
                ((y, z) for z in graph.out_neighbors(y)),
            ):
                if e not in pending:
                    pending.add(e)
                    arcs.append(e)
    return True


def path_csp_satisfiable(
    graph: Digraph,
    lvl: Mapping[str, int],
    q: OrientedPath,
    pins: Mapping[str, str] | None = None,
    shift: int | None = None,
) -> dict[str, str] | None:
    """Decide whether a connected levelled digraph maps into a path.

    ``pins`` maps input vertices to required path vertices and fixes the
    level shift; without pins all shifts placing the input inside the path's
    level range are tried in increasing order.  Returns the pointwise
    leftmost homomorphism (smallest path position per vertex) or ``None``.
    """
    pins = dict(pins or {})
    if not graph.vertices:
        return {}
    lo = min(lvl[v] for v in graph.vertices)
    hi = max(lvl[v] for v in graph.vertices)
    if pins:
        shifts = {q.lvl[t] - lvl[v] for v, t in pins.items()}
        if len(shifts) > 1:
            raise StructureError("pins do not agree on a common level shift")
        candidates = [shifts.pop()]
        if shift is not None and candidates != [shift]:
            raise StructureError("explicit shift contradicts pins")
    elif shift is not None:
        candidates = [shift]
    else:
        candidates = list(range(-lo, q.height - hi + 1))
    for s in candidates:
        if lo + s < 0 or hi + s > q.height:
            continue
        domains: dict[str, set[str]] = {}
        ok = True
        for v in graph.vertices:
            dom = set(q.by_level.get(lvl[v] + s, ()))
            if v in pins:
                dom &= {pins[v]}
            if not dom:
                ok = False
                break
            domains[v] = dom
        if not ok:
            continue
        if not _ac_fixpoint(graph, domains, q):
            continue
        hom = {v: min(domains[v], key=lambda t: q.pos[t]) for v in graph.vertices}
        for a, b in graph.edges:  # the extraction is exact for path targets
            if (hom[a], hom[b]) not in q.edges:
                raise PolymorphismCheckError(
                    "leftmost extraction failed on an arc-consistent path instance"
                )
        return hom
    return None


def gamma(
    graph: Digraph,
    lvl: Mapping[str, int],
    n: int,
    pin_entry: Iterable[str] = (),
    pin_exit: Iterable[str] = (),
) -> frozenset[int]:
    """The inclusion-minimal subset whose path satisfies the component.

    Uses n leave-one-out satisfiability calls plus one verification call.
    ``pin_entry`` vertices are pinned to the path's unique out-neighbour of
    its initial vertex, ``pin_exit`` to the unique in-neighbour of its
    terminal vertex (the anchored variant used by the backward reduction).
    """
    pin_entry = tuple(pin_entry)
    pin_exit = tuple(pin_exit)

    def sat(subset: frozenset[int]) -> bool:
        q = build_q_path(n, subset)
        pins = {v: q.names[1] for v in pin_entry}
        pins.update({v: q.names[-2] for v in pin_exit})
        return path_csp_satisfiable(graph, lvl, q, pins=pins) is not None

    full = frozenset(range(1, n + 1))
    if not sat(full):
        raise NotSatisfiableAnywhereError(
            "component has no homomorphism into the all-single-edge path"
        )
    minimal = frozenset(i for i in range(1, n + 1) if not sat(full - {i}))
    if not sat(minimal):
        raise MonotonicityViolationError(
            f"leave-one-out set {sorted(minimal)} is not itself satisfiable"
        )
    return minimal


@dataclass(frozen=True)
class Fan:
    """Paths amalgamated at one shared initial or terminal vertex."""

    paths: tuple[OrientedPath, ...]
    apex: str
    kind: str  # "initial" | "terminal"
    graph: Digraph
    lvl: Mapping[str, int]

    def __post_init__(self):
        if self.kind not in ("initial", "terminal"):
            raise StructureError("fan kind must be 'initial' or 'terminal'")
        heights = {p.height for p in self.paths}
        if len(heights) != 1:
            raise StructureError("fan paths must share one height")
        for p in self.paths:
            shared = p.iota if self.kind == "initial" else p.tau
            if shared != self.apex:
                raise StructureError("fan paths must share the apex vertex")

    @property
    def height(self) -> int:
        return self.paths[0].height


def build_fan(paths: Sequence[OrientedPath], kind: str) -> Fan:
    """Amalgamate freshly relabelled copies of the given paths at one vertex."""
    apex = "fan:v"
    relabelled = []
    for idx, p in enumerate(paths):
        mapping = {v: f"fan:{idx}:{v}" for v in p.names}
        shared = p.iota if kind == "initial" else p.tau
        mapping[shared] = apex
        relabelled.append(p.relabel(mapping))
    vertices: dict[str, int] = {}
    edges: set[tuple[str, str]] = set()
    lvl: dict[str, int] = {}
    for p in relabelled:
        for v in p.names:
            vertices.setdefault(v, len(vertices))
            lvl[v] = p.lvl[v]
        edges |= p.edges
    graph = Digraph(tuple(vertices), frozenset(edges))
    return Fan(tuple(relabelled), apex, kind, graph, lvl)


class Infeasible:
    """No homomorphism of the input into the fan exists."""

    def __repr__(self):
        return "Infeasible"


class NoOptimisationImpact:
    """Feasible with optimum zero: the component never affects the objective."""

    def __repr__(self):
        return "NoOptimisationImpact"


INFEASIBLE = Infeasible()
NO_IMPACT = NoOptimisationImpact()


@dataclass(frozen=True)
class FanOptimum:
    cost: Cost
    hom: Mapping[str, str]


def _component_split(graph: Digraph) -> list[tuple[str, ...]]:
    seen: set[str] = set()
    out = []
    for root in graph.vertices:
        if root in seen:
            continue
        members = [root]
        seen.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in itertools.chain(graph.out_neighbors(x), graph.in_neighbors(x)):
                if y not in seen:
                    seen.add(y)
                    members.append(y)
                    queue.append(y)
        out.append(tuple(sorted(members, key=graph.index)))
    return out


def fan_min_cost(
    graph: Digraph,
    lvl: Mapping[str, int],
    weights: Mapping[str, Cost],
    fan: Fan,
    u_fan: Mapping[str, Cost],
) -> FanOptimum | Infeasible | NoOptimisationImpact:
    """Minimum-cost homomorphism of a strictly lower connected input into a fan.

    Solutions inside a single path are scanned over all level shifts; only
    the topmost shift can meet the unary support, and there the input's top
    vertices are forced onto the path's single top vertex.  Solutions through
    the apex are decomposed into per-path subproblems with the boundary
    vertices pinned next to the apex.  The unary map must be supported on
    top-level fan vertices.
    """
    m = fan.height
    if not graph.vertices:
        return NO_IMPACT
    h = max(lvl[v] for v in graph.vertices)
    if min(lvl[v] for v in graph.vertices) != 0:
        raise StructureError("input levels must be normalized to minimum 0")
    if h >= m:
        raise StructureError("fan inputs must have height strictly below the fan")
    for v, c in u_fan.items():
        if v not in fan.lvl:
            raise StructureError(f"unary map on unknown fan vertex {v!r}")
        if c != ZERO and fan.lvl[v] != m:
            raise StructureError("unary support must sit at the fan's top level")

    top_sum = sum((weights[v] for v in weights if lvl[v] == h), ZERO)
    best: tuple[Cost, dict[str, str]] | None = None

    def consider(cost: Cost, hom: dict[str, str]):
        nonlocal best
        if best is None or cost < best[0]:
            best = (cost, hom)

    for shift in range(0, m - h + 1):
        for path in fan.paths:
            if best is not None and best[0] == ZERO:
                break
            hom = path_csp_satisfiable(graph, lvl, path, shift=shift)
            if hom is None:
                continue
            if shift == m - h:
                cost = u_fan.get(path.tau, ZERO).scale(top_sum.as_fraction())
            else:
                cost = ZERO
            consider(cost, hom)
        if best is not None and best[0] == ZERO:
            break

    if best is None or best[0] > ZERO:
        through = _through_apex(graph, lvl, fan, h)
        if through is not None:
            if fan.kind == "terminal":
                cost = u_fan.get(fan.apex, ZERO).scale(top_sum.as_fraction())
            else:
                cost = ZERO
            consider(cost, through)

    if best is None:
        return INFEASIBLE
    if best[0] == ZERO:
        return NO_IMPACT
    return FanOptimum(best[0], best[1])


def _through_apex(
    graph: Digraph, lvl: Mapping[str, int], fan: Fan, h: int
) -> dict[str, str] | None:
    """Assemble a solution mapping the apex-level boundary of the input onto the apex."""
    m = fan.height
    if fan.kind == "terminal":
        boundary = [v for v in graph.vertices if lvl[v] == h]
        shift = m - h
    else:
        boundary = [v for v in graph.vertices if lvl[v] == 0]
        shift = 0
    if not boundary:
        return None
    rest = [v for v in graph.vertices if v not in set(boundary)]
    if not rest:
        return {v: fan.apex for v in boundary}
    hom: dict[str, str] = {v: fan.apex for v in boundary}
    sub = graph.induced(rest)
    boundary_set = set(boundary)
    for members in _component_split(sub):
        extended = graph.induced(
            list(members)
            + [
                v
                for v in boundary
                if any(
                    (v, w) in graph.edges or (w, v) in graph.edges
                    for w in members
                )
            ]
        )
        placed = None
        for path in fan.paths:
            pins = {v: fan.apex for v in extended.vertices if v in boundary_set}
            placed = path_csp_satisfiable(extended, lvl, path, pins=pins, shift=shift)
            if placed is not None:
                break
        if placed is None:
            return None
        for v, t in placed.items():
            if v not in boundary_set:
                hom[v] = t
    return hom
