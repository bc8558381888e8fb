"""The digraph-plus-unary encoding: counts, shapes, roles and rigidity."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest

from costhom import (
    Cost,
    ZERO,
    Digraph,
    WeightedRelation,
    build_encoding,
    compute_levels,
    gamma,
    internal_components,
    is_rigid_core_pair,
    verify_encoding,
)
from costhom.encoding import expected_edge_count, expected_vertex_count
from costhom.errors import BiconditionalViolationError


def random_relation(rng: random.Random, n_max=3, d_max=3, r_max=5) -> WeightedRelation:
    n = rng.randint(1, n_max)
    d = rng.randint(1, d_max)
    domain = tuple(str(i) for i in range(d))
    universe = [
        tuple(rng.choice(domain) for _ in range(n)) for _ in range(4 * r_max)
    ]
    unique = list(dict.fromkeys(universe))
    k = rng.randint(1, min(r_max, len(unique)))
    entries = {
        t: Cost.of(rng.randint(0, 4)) for t in unique[:k]
    }
    return WeightedRelation(n, domain, entries)


class TestBuildEncoding:
    def test_worked_example_counts(self, swap_relation):
        enc = build_encoding(swap_relation)
        assert len(enc.graph.vertices) == 24
        assert len(enc.graph.edges) == 24
        leveled = compute_levels(enc.graph)
        assert leveled.height == 4
        assert leveled.level_profile() == [2, 6, 8, 6, 2]

    def test_worked_example_unary(self, swap_relation):
        enc = build_encoding(swap_relation)
        assert enc.u("t:0,1") == Cost.of(2)
        assert enc.u("t:1,0") == Cost.of(1)
        others = [v for v in enc.graph.vertices if not v.startswith("t:")]
        assert all(enc.u(v) == ZERO for v in others)

    def test_roles_partition(self, swap_relation):
        enc = build_encoding(swap_relation)
        kinds = {v: enc.roles[v].kind for v in enc.graph.vertices}
        assert sorted(v for v, k in kinds.items() if k == "base") == ["b:0", "b:1"]
        assert sorted(v for v, k in kinds.items() if k == "tuple") == ["t:0,1", "t:1,0"]
        assert sum(1 for k in kinds.values() if k == "path") == 20

    def test_path_subsets(self, swap_relation):
        enc = build_encoding(swap_relation)
        assert enc.subset_for("0", ("0", "1")) == frozenset({1})
        assert enc.subset_for("1", ("0", "1")) == frozenset({2})
        assert enc.subset_for("0", ("1", "0")) == frozenset({2})
        assert enc.subset_for("1", ("1", "0")) == frozenset({1})

    def test_size_formulas_on_random_corpus(self):
        rng = random.Random(20)
        for _ in range(50):
            rho = random_relation(rng)
            enc = build_encoding(rho)
            n, r, d = rho.arity, len(rho.tuples()), len(rho.domain)
            assert len(enc.graph.vertices) == expected_vertex_count(n, r, d)
            assert len(enc.graph.edges) == expected_edge_count(n, r, d)
            leveled = compute_levels(enc.graph)
            assert leveled.height == n + 2
            assert len(leveled.components) == 1

    def test_interiors_are_paths_with_expected_gamma(self):
        rng = random.Random(21)
        for _ in range(12):
            rho = random_relation(rng, n_max=2, d_max=2, r_max=3)
            enc = build_encoding(rho)
            leveled = compute_levels(enc.graph)
            comps = internal_components(leveled)
            assert len(comps) == len(rho.domain) * len(rho.tuples())
            for comp in comps:
                role = enc.roles[comp.graph.vertices[0]]
                expected = enc.subset_for(role.d, role.r)
                entry = tuple(v for _, v in comp.bottom_attach)
                exit_ = tuple(v for v, _ in comp.top_attach)
                got = gamma(
                    comp.graph, comp.lvl, enc.n,
                    pin_entry=entry, pin_exit=exit_,
                )
                assert got == expected


class TestVerifyEncoding:
    def test_fresh_encoding_is_clean(self, swap_relation):
        enc = build_encoding(swap_relation)
        assert verify_encoding(enc, swap_relation) is None

    def test_edge_deletion_detected(self, swap_relation):
        enc = build_encoding(swap_relation)
        victim = sorted(enc.graph.edges)[5]
        mutated = replace(
            enc, graph=Digraph(enc.graph.vertices, enc.graph.edges - {victim})
        )
        violation = verify_encoding(mutated, swap_relation)
        assert violation is not None
        assert violation.check in ("edge-count", "balance", "path-shape", "edge-cover")

    def test_widened_support_detected(self, swap_relation):
        enc = build_encoding(swap_relation)
        path_vertex = next(v for v in enc.graph.vertices if v.startswith("p:"))
        widened = dict(enc.u_support)
        widened[path_vertex] = Cost.of(1)
        mutated = replace(enc, u_support=widened)
        violation = verify_encoding(mutated, swap_relation)
        assert violation is not None
        assert violation.check == "u-support"

    def test_extra_edge_detected(self, swap_relation):
        enc = build_encoding(swap_relation)
        # an edge between two different paths at adjacent levels keeps the
        # graph balanced but breaks the counts and the path partition
        a = next(v for v in enc.graph.vertices if v.startswith("p:0|0,1") and enc.lvl[v] == 1)
        b = next(v for v in enc.graph.vertices if v.startswith("p:1|1,0") and enc.lvl[v] == 2)
        assert (a, b) not in enc.graph.edges
        mutated = replace(
            enc, graph=Digraph(enc.graph.vertices, enc.graph.edges | {(a, b)})
        )
        assert verify_encoding(mutated, swap_relation) is not None


class TestRigidCorePair:
    def test_swap_language_is_core_not_rigid(self, swap_relation):
        enc = build_encoding(swap_relation)
        rigid_a, rigid_d, witness = is_rigid_core_pair(swap_relation, enc)
        assert (rigid_a, rigid_d) == (False, False)
        assert witness is not None
        assert any(witness[v] != v for v in enc.graph.vertices)
        # the witness on the bases is the swap
        assert witness["b:0"] == "b:1" and witness["b:1"] == "b:0"

    def test_one_directed_pair_is_rigid(self):
        rho = WeightedRelation(2, ("0", "1"), {("0", "1"): Cost.of(1)})
        enc = build_encoding(rho)
        rigid_a, rigid_d, witness = is_rigid_core_pair(rho, enc)
        assert (rigid_a, rigid_d) == (True, True)
        assert witness is None

    def test_single_element_domain_rigid(self):
        rho = WeightedRelation(1, ("0",), {("0",): ZERO})
        enc = build_encoding(rho)
        rigid_a, rigid_d, _ = is_rigid_core_pair(rho, enc)
        assert rigid_a and rigid_d

    def test_biconditional_on_random_corpus(self):
        rng = random.Random(22)
        for _ in range(25):
            rho = random_relation(rng, n_max=2, d_max=3, r_max=4)
            enc = build_encoding(rho)
            # must not raise BiconditionalViolationError
            rigid_a, rigid_d, _ = is_rigid_core_pair(rho, enc)
            assert rigid_a == rigid_d
