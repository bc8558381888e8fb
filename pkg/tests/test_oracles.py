"""Reference solvers: enumeration counts, budgets, optima, determinism."""

from __future__ import annotations

import random

import pytest

from costhom import (
    Cost,
    INF,
    ZERO,
    Constraint,
    Digraph,
    MinCostHomInstance,
    SearchBudget,
    VCSPInstance,
    WeightedRelation,
    WeightedStructure,
    build_encoding,
    build_q_path,
    brute_force_mch,
    brute_force_vcsp,
    compute_levels,
    enumerate_homomorphisms,
    forward_reduce,
)
from costhom.errors import BudgetExceededError


def single_edge() -> Digraph:
    return Digraph(("a", "b"), frozenset({("a", "b")}))


def zigzag_graph() -> Digraph:
    return Digraph(
        ("z0", "z1", "z2", "z3"),
        frozenset({("z0", "z1"), ("z2", "z1"), ("z2", "z3")}),
    )


class TestEnumerateHomomorphisms:
    def test_edge_to_edge(self):
        homs = enumerate_homomorphisms(single_edge(), single_edge())
        assert homs == [{"a": "a", "b": "b"}]

    def test_zigzag_to_edge_collapses_uniquely(self):
        homs = enumerate_homomorphisms(zigzag_graph(), single_edge())
        assert homs == [{"z0": "a", "z1": "b", "z2": "a", "z3": "b"}]

    def test_edge_to_zigzag_is_edge_count(self):
        homs = enumerate_homomorphisms(single_edge(), zigzag_graph())
        assert len(homs) == 3  # one per target edge

    def test_level_pruned_equals_unpruned(self):
        rng = random.Random(17)
        q1 = build_q_path(2, {1})
        q2 = build_q_path(2, set())
        for x, a in [(q1, q2), (q2, q1), (q1, q1)]:
            pruned = enumerate_homomorphisms(
                x.digraph(), a.digraph(), x_lvl=x.lvl, a_lvl=a.lvl
            )
            plain = enumerate_homomorphisms(x.digraph(), a.digraph())
            assert pruned == plain

    def test_budget_exceeded(self):
        g = Digraph(tuple(f"v{i}" for i in range(8)), frozenset())
        big = Digraph(tuple(f"t{i}" for i in range(8)), frozenset())
        with pytest.raises(BudgetExceededError):
            enumerate_homomorphisms(g, big, budget=SearchBudget(max_assignments=100))

    def test_deterministic(self):
        q1 = build_q_path(1, set())
        q2 = build_q_path(1, {1})
        first = enumerate_homomorphisms(q1.digraph(), q2.digraph())
        second = enumerate_homomorphisms(q1.digraph(), q2.digraph())
        assert first == second


class TestBruteForceVcsp:
    def test_maxcut_triangle(self, maxcut_relation):
        structure = WeightedStructure(("0", "1"), {"mc": maxcut_relation})
        inst = VCSPInstance(
            ("x", "y", "z"),
            (
                Constraint("mc", ("x", "y"), Cost.of(1)),
                Constraint("mc", ("y", "z"), Cost.of(1)),
                Constraint("mc", ("x", "z"), Cost.of(1)),
            ),
        )
        best, assignment = brute_force_vcsp(inst, structure)
        assert best == Cost.of(1)
        assert assignment is not None

    def test_swap_language_single_constraint(self, swap_structure, swap_instance):
        best, assignment = brute_force_vcsp(swap_instance, swap_structure)
        assert best == Cost.of(1)
        assert assignment == {"x": "1", "y": "0"}

    def test_infeasible_crisp(self, swap_structure):
        inst = VCSPInstance(
            ("x",),
            (Constraint("rho", ("x", "x"), ZERO),),
        )
        best, assignment = brute_force_vcsp(inst, swap_structure)
        assert best == INF
        assert assignment is None

    def test_ties_break_lexicographically(self, maxcut_relation):
        structure = WeightedStructure(("0", "1"), {"mc": maxcut_relation})
        inst = VCSPInstance(("x", "y"), (Constraint("mc", ("x", "y"), Cost.of(1)),))
        _, assignment = brute_force_vcsp(inst, structure)
        assert assignment == {"x": "0", "y": "1"}


class TestBruteForceMch:
    def test_fan_gadget_optimum(self, swap_relation, swap_structure, swap_instance):
        enc = build_encoding(swap_relation)
        gadget = forward_reduce(swap_instance, enc)
        leveled = compute_levels(gadget.graph)
        best, hom = brute_force_mch(
            gadget, enc.graph, enc.u_support,
            instance_lvl=leveled.lvl, target_lvl=enc.lvl,
        )
        assert best == Cost.of(1)
        assert hom is not None

    def test_empty_weights_zero_iff_feasible(self, swap_relation):
        enc = build_encoding(swap_relation)
        g = single_edge()
        inst = MinCostHomInstance(g, {})
        best, hom = brute_force_mch(inst, enc.graph, enc.u_support)
        assert best == ZERO and hom is not None

    def test_unmappable_graph(self, swap_relation):
        enc = build_encoding(swap_relation)
        tall = Digraph(
            tuple(f"v{i}" for i in range(6)),
            frozenset({(f"v{i}", f"v{i+1}") for i in range(5)}),
        )
        best, hom = brute_force_mch(MinCostHomInstance(tall, {}), enc.graph, enc.u_support)
        assert best == INF and hom is None

    def test_component_decomposition_matches_costs(self, swap_relation):
        enc = build_encoding(swap_relation)
        # two disjoint copies of a path forced onto tuple vertices
        q = build_q_path(2, {1})
        parts = {}
        vertices, edges = [], set()
        for tag in ("A", "B"):
            mapping = {v: f"{tag}:{v}" for v in q.names}
            ren = q.relabel(mapping)
            vertices.extend(ren.names)
            edges |= ren.edges
            parts[tag] = ren
        inst = MinCostHomInstance(
            Digraph(tuple(vertices), frozenset(edges)),
            {parts["A"].tau: Cost.of(1), parts["B"].tau: Cost.of(2)},
        )
        leveled = compute_levels(inst.graph)
        best, _ = brute_force_mch(
            inst, enc.graph, enc.u_support,
            instance_lvl=leveled.lvl, target_lvl=enc.lvl,
        )
        # each copy maps its top onto the cheaper tuple vertex u=1
        assert best == Cost.of(3)
