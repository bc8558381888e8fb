"""Seeded random corpora for round-trip verification.

Everything here is a pure function of its ``random.Random`` source, so a
seed fully determines each corpus.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

from .costs import Cost, ZERO, Constraint, VCSPInstance, WeightedRelation, WeightedStructure
from .digraphs import Digraph, build_q_path
from .encoding import EncodedDigraph, build_encoding
from .reductions import MinCostHomInstance


def random_cost(rng: random.Random, max_num=4, max_den=3, zero_bias=0.25) -> Cost:
    if rng.random() < zero_bias:
        return ZERO
    return Cost(Fraction(rng.randint(0, max_num), rng.randint(1, max_den)))


def random_relation(
    rng: random.Random, n_max=3, d_max=3, r_max=5, n_min=1, d_min=1
) -> WeightedRelation:
    n = rng.randint(n_min, n_max)
    d = rng.randint(d_min, d_max)
    domain = tuple(str(i) for i in range(d))
    pool = list(dict.fromkeys(
        tuple(rng.choice(domain) for _ in range(n)) for _ in range(4 * r_max)
    ))
    k = rng.randint(1, min(r_max, len(pool)))
    return WeightedRelation(n, domain, {t: random_cost(rng) for t in pool[:k]})


def random_structure(rng: random.Random, name="rho", **kwargs) -> WeightedStructure:
    rho = random_relation(rng, **kwargs)
    return WeightedStructure(rho.domain, {name: rho})


def random_instance(
    rng: random.Random,
    structure: WeightedStructure,
    max_vars=4,
    max_constraints=3,
) -> VCSPInstance:
    variables = tuple(f"v{i}" for i in range(rng.randint(1, max_vars)))
    constraints = []
    for _ in range(rng.randint(0, max_constraints)):
        name = rng.choice(list(structure.relations))
        arity = structure.relations[name].arity
        scope = tuple(rng.choice(variables) for _ in range(arity))
        constraints.append(Constraint(name, scope, random_cost(rng)))
    return VCSPInstance(variables, tuple(constraints))


def _copy_path_piece(rng, enc: EncodedDigraph, tag: str, full: bool):
    """A fresh-named copy of a whole target path or a contiguous piece."""
    d = rng.choice(enc.domain)
    r = rng.choice(enc.tuples)
    path = enc.path_object(d, r)
    if full:
        piece = path.names
    else:
        length = rng.randint(1, len(path.names) - 1)
        start = rng.randint(0, len(path.names) - length)
        piece = path.names[start:start + length]
    keep = set(piece)
    mapping = {v: f"{tag}:{i}" for i, v in enumerate(path.names) if v in keep}
    vertices = tuple(mapping[v] for v in piece)
    edges = frozenset(
        (mapping[a], mapping[b]) for a, b in path.edges if a in keep and b in keep
    )
    lvl = {mapping[v]: path.lvl[v] for v in piece}
    return vertices, edges, lvl


def _gadget_fan(rng, enc: EncodedDigraph, tag: str):
    """A fresh constraint gadget: marked paths glued onto one apex."""
    n = enc.n
    apex = f"{tag}:apex"
    vertices: dict[str, None] = {}
    edges: set[tuple[str, str]] = set()
    lvl: dict[str, int] = {}
    for i in range(1, rng.randint(1, n) + 1):
        q = build_q_path(n, frozenset({i}))
        mapping = {v: f"{tag}:p{i}:{v}" for v in q.names}
        mapping[q.tau] = apex
        ren = q.relabel(mapping)
        for v in ren.names:
            vertices.setdefault(v)
            lvl[v] = ren.lvl[v]
        edges |= ren.edges
    return tuple(vertices), frozenset(edges), lvl


def random_mch_instance(
    rng: random.Random,
    enc: EncodedDigraph,
    max_pieces=3,
    weird_bias=0.1,
) -> MinCostHomInstance:
    """Unions of path pieces and gadget fans, with occasional bad inputs.

    With probability ``weird_bias`` the instance is deliberately unbalanced
    or too tall, exercising the fixed-no path of the reduction.
    """
    roll = rng.random()
    if roll < weird_bias / 2:
        g = Digraph(("c0", "c1", "c2"), frozenset({("c0", "c1"), ("c1", "c2"), ("c2", "c0")}))
        return MinCostHomInstance(g, {})
    if roll < weird_bias:
        names = tuple(f"tall{i}" for i in range(enc.height + 2))
        edges = frozenset((names[i], names[i + 1]) for i in range(len(names) - 1))
        return MinCostHomInstance(Digraph(names, edges), {})
    vertices: list[str] = []
    edges: set[tuple[str, str]] = set()
    lvl: dict[str, int] = {}
    for p in range(rng.randint(1, max_pieces)):
        kind = rng.random()
        if kind < 0.45:
            vs, es, ls = _copy_path_piece(rng, enc, f"g{p}", full=True)
        elif kind < 0.8:
            vs, es, ls = _copy_path_piece(rng, enc, f"g{p}", full=False)
        else:
            vs, es, ls = _gadget_fan(rng, enc, f"g{p}")
        vertices.extend(vs)
        edges |= es
        lvl.update(ls)
    if len(vertices) > 1 and rng.random() < 0.3:
        # glue two same-level vertices to correlate components
        a = rng.choice(vertices)
        candidates = [v for v in vertices if v != a and lvl[v] == lvl[a]]
        if candidates:
            # same-level identification cannot create a self-loop or unbalance
            b = rng.choice(candidates)
            vertices = [v for v in vertices if v != b]
            edges = {(a if x == b else x, a if y == b else y) for x, y in edges}
    graph = Digraph(tuple(dict.fromkeys(vertices)), frozenset(edges))
    weights: dict[str, Cost] = {}
    top = max(lvl.values(), default=0)
    for v in graph.vertices:
        level = lvl.get(v, 0)
        chance = 0.35 if level == top else 0.08
        if rng.random() < chance:
            weights[v] = random_cost(rng, zero_bias=0.15)
    return MinCostHomInstance(graph, weights)


def forward_corpus(seed: int, count: int):
    """(structure, encoding, instance) triples for forward verification."""
    rng = random.Random(seed)
    cases = []
    while len(cases) < count:
        structure = random_structure(rng, n_max=2, d_max=3, r_max=4)
        enc = build_encoding(
            structure.relations["rho"], relation_name="rho"
        )
        for _ in range(rng.randint(1, 3)):
            if len(cases) >= count:
                break
            inst = random_instance(rng, structure)
            cases.append((structure, enc, inst))
    return cases


def backward_corpus(seed: int, count: int):
    """(encoding, mch instance) pairs for backward verification."""
    rng = random.Random(seed)
    cases = []
    while len(cases) < count:
        rho = random_relation(rng, n_max=3, d_max=3, r_max=5)
        enc = build_encoding(rho, relation_name="rho")
        for _ in range(rng.randint(1, 3)):
            if len(cases) >= count:
                break
            cases.append((enc, random_mch_instance(rng, enc)))
    return cases


def encoding_corpus(seed: int, count: int):
    """Relations plus their encodings, at the documented size caps."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        rho = random_relation(rng, n_max=3, d_max=3, r_max=5)
        out.append((rho, build_encoding(rho)))
    return out
