"""Cost arithmetic, evaluation, products and the collapse rewrite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from costhom import (
    Cost,
    INF,
    ZERO,
    Constraint,
    VCSPInstance,
    WeightedRelation,
    WeightedStructure,
    collapse_to_single_relation,
    direct_product,
    eval_instance,
    feas,
    rewrite_over_collapsed,
)
from costhom.errors import StructureError
from costhom.oracles import brute_force_vcsp


finite_costs = st.builds(
    lambda p, q: Cost(Fraction(p, q)),
    st.integers(min_value=0, max_value=50),
    st.integers(min_value=1, max_value=12),
)
costs = st.one_of(finite_costs, st.just(INF))


@given(costs, costs, costs)
@settings(max_examples=200)
def test_addition_associative_commutative(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a


@given(costs, costs, costs)
@settings(max_examples=200)
def test_order_total_and_compatible_with_addition(a, b, c):
    assert (a < b) or (b < a) or (a == b)
    if a <= b:
        assert a + c <= b + c


@given(costs)
def test_infinity_absorbs(a):
    assert a + INF == INF
    assert INF + a == INF
    assert a <= INF


@given(finite_costs, st.integers(min_value=0, max_value=9))
def test_scaling(a, k):
    assert a.scale(k) == Cost(a.as_fraction() * k)
    assert INF.scale(k) == (ZERO if k == 0 else INF)


def test_cost_parse_round_trip():
    assert Cost.parse("3/2") == Cost(Fraction(3, 2))
    assert Cost.parse("4") == Cost.of(4)
    assert Cost.parse("inf") == INF
    assert str(Cost(Fraction(3, 2))) == "3/2"
    assert str(INF) == "inf"
    with pytest.raises(ValueError):
        Cost.of(-1)


def test_relation_rejects_bad_entries():
    with pytest.raises(StructureError):
        WeightedRelation(2, ("0", "1"), {})
    with pytest.raises(StructureError):
        WeightedRelation(2, ("0", "1"), {("0",): ZERO})
    with pytest.raises(StructureError):
        WeightedRelation(1, ("0", "1"), {("2",): ZERO})
    with pytest.raises(StructureError):
        WeightedRelation(1, ("0", "1"), {("0",): INF})


class TestEvalInstance:
    def test_single_constraint_defined_tuple(self, swap_structure, swap_instance):
        cost = eval_instance(swap_instance, swap_structure, {"x": "1", "y": "0"})
        assert cost == Cost.of(1)

    def test_single_constraint_undefined_tuple(self, swap_structure, swap_instance):
        assert eval_instance(swap_instance, swap_structure, {"x": "0", "y": "0"}) == INF

    def test_empty_constraint_list(self, swap_structure):
        inst = VCSPInstance(("x",), ())
        assert eval_instance(inst, swap_structure, {"x": "0"}) == ZERO

    def test_weighted_sum(self, swap_structure, swap_relation):
        inst = VCSPInstance(
            ("x", "y"),
            (
                Constraint("rho", ("x", "y"), Cost.of(2)),
                Constraint("rho", ("y", "x"), Cost.of(Fraction(1, 2))),
            ),
        )
        # 2*rho(0,1) + (1/2)*rho(1,0) = 4 + 1/2
        assert eval_instance(inst, swap_structure, {"x": "0", "y": "1"}) == Cost(Fraction(9, 2))

    def test_zero_weight_still_enforces_feasibility(self, swap_structure):
        inst = VCSPInstance(("x", "y"), (Constraint("rho", ("x", "y"), ZERO),))
        assert eval_instance(inst, swap_structure, {"x": "0", "y": "0"}) == INF
        assert eval_instance(inst, swap_structure, {"x": "0", "y": "1"}) == ZERO

    def test_structural_errors_distinct_from_infinite(self, swap_structure):
        inst = VCSPInstance(("x", "y"), (Constraint("nope", ("x", "y"), ZERO),))
        with pytest.raises(StructureError):
            eval_instance(inst, swap_structure, {"x": "0", "y": "0"})
        bad_arity = VCSPInstance(("x",), (Constraint("rho", ("x",), ZERO),))
        with pytest.raises(StructureError):
            eval_instance(bad_arity, swap_structure, {"x": "0"})
        good = VCSPInstance(("x", "y"), (Constraint("rho", ("x", "y"), ZERO),))
        with pytest.raises(StructureError):
            eval_instance(good, swap_structure, {"x": "0"})

    def test_scaling_all_weights_scales_cost(self, swap_structure, swap_relation):
        rng = random.Random(7)
        for _ in range(25):
            n_constraints = rng.randint(0, 3)
            constraints = tuple(
                Constraint(
                    "rho",
                    (rng.choice("xy"), rng.choice("xy")),
                    Cost(Fraction(rng.randint(0, 5), rng.randint(1, 3))),
                )
                for _ in range(n_constraints)
            )
            inst = VCSPInstance(("x", "y"), constraints)
            lam = Fraction(rng.randint(0, 4), rng.randint(1, 3))
            scaled = VCSPInstance(
                ("x", "y"),
                tuple(Constraint(c.relation, c.scope, c.weight.scale(lam)) for c in constraints),
            )
            assignment = {"x": rng.choice("01"), "y": rng.choice("01")}
            base = eval_instance(inst, swap_structure, assignment)
            scaled_cost = eval_instance(scaled, swap_structure, assignment)
            if base.is_finite:
                assert scaled_cost == base.scale(lam)


class TestDirectProduct:
    def test_singleton_product_is_identity(self, swap_relation):
        assert direct_product([swap_relation]) == swap_relation

    def test_two_copies(self, swap_relation):
        prod = direct_product([swap_relation, swap_relation])
        assert prod.arity == 4
        assert len(prod.entries) == 4
        assert prod.entries[("0", "1", "1", "0")] == Cost.of(3)
        # brute-force the product enumeration independently
        expected = {}
        for t1, w1 in swap_relation.entries.items():
            for t2, w2 in swap_relation.entries.items():
                expected[t1 + t2] = w1 + w2
        assert dict(prod.entries) == expected

    def test_maxcut_times_swap(self, maxcut_relation, swap_relation):
        prod = direct_product([maxcut_relation, swap_relation])
        assert len(prod.entries) == 8
        assert prod.arity == 4

    def test_mixed_domains_rejected(self, swap_relation):
        other = WeightedRelation(1, ("a",), {("a",): ZERO})
        with pytest.raises(StructureError):
            direct_product([swap_relation, other])


class TestFeas:
    def test_swap_relation(self, swap_relation):
        assert set(feas(swap_relation)) == {("0", "1"), ("1", "0")}

    def test_total_relation(self, maxcut_relation):
        assert len(feas(maxcut_relation)) == 4

    def test_product_feas_is_product_of_feas(self, maxcut_relation, swap_relation):
        prod = direct_product([maxcut_relation, swap_relation])
        expected = {
            t1 + t2 for t1 in feas(maxcut_relation) for t2 in feas(swap_relation)
        }
        assert set(feas(prod)) == expected


class TestCollapse:
    def test_single_relation_unchanged(self, swap_structure):
        collapsed, blocks = collapse_to_single_relation(swap_structure)
        assert collapsed is swap_structure
        assert [(b.relation, b.start, b.arity) for b in blocks] == [("rho", 0, 2)]

    def test_two_relations(self, swap_relation):
        unary = WeightedRelation(1, ("0", "1"), {("0",): ZERO, ("1",): Cost.of(1)})
        structure = WeightedStructure(("0", "1"), {"rho": swap_relation, "mu": unary})
        collapsed, blocks = collapse_to_single_relation(structure)
        assert len(collapsed.relations) == 1
        (product,) = collapsed.relations.values()
        assert product.arity == 3
        assert [(b.relation, b.start, b.arity) for b in blocks] == [
            ("rho", 0, 2),
            ("mu", 2, 1),
        ]

    def test_rewrite_preserves_optimum_modulo_offset(self, swap_relation):
        rng = random.Random(11)
        unary = WeightedRelation(1, ("0", "1"), {("0",): ZERO, ("1",): Cost.of(1)})
        zero_min = WeightedRelation(
            2, ("0", "1"), {("0", "0"): ZERO, ("1", "1"): Cost.of(2)}
        )
        structure = WeightedStructure(
            ("0", "1"), {"rho": swap_relation, "mu": unary, "nu": zero_min}
        )
        collapsed, blocks = collapse_to_single_relation(structure)
        names = list(structure.relations)
        for trial in range(30):
            variables = tuple(f"v{i}" for i in range(rng.randint(1, 4)))
            constraints = []
            for _ in range(rng.randint(0, 3)):
                name = rng.choice(names)
                arity = structure.relations[name].arity
                scope = tuple(rng.choice(variables) for _ in range(arity))
                constraints.append(
                    Constraint(name, scope, Cost.of(rng.randint(0, 3)))
                )
            inst = VCSPInstance(variables, tuple(constraints))
            rewritten, offset = rewrite_over_collapsed(inst, structure, collapsed, blocks)
            lhs, _ = brute_force_vcsp(inst, structure)
            rhs, _ = brute_force_vcsp(rewritten, collapsed)
            assert rhs == (lhs + offset if lhs.is_finite else INF)

    def test_rewrite_eval_pointwise(self, swap_relation):
        """Every original assignment extends (pads at minima) to cost + offset."""
        unary = WeightedRelation(1, ("0", "1"), {("0",): Cost.of(1), ("1",): Cost.of(2)})
        structure = WeightedStructure(("0", "1"), {"rho": swap_relation, "mu": unary})
        collapsed, blocks = collapse_to_single_relation(structure)
        inst = VCSPInstance(
            ("x", "y"), (Constraint("rho", ("x", "y"), Cost.of(2)),)
        )
        rewritten, offset = rewrite_over_collapsed(inst, structure, collapsed, blocks)
        # unary minimum is 1, so the one rho-constraint pays 2*1 of padding
        assert offset == Cost.of(2)
        for x in "01":
            for y in "01":
                base = eval_instance(inst, structure, {"x": x, "y": y})
                best = INF
                pads = [v for v in rewritten.variables if v.startswith("pad:")]
                for pad_val in ("0", "1"):
                    assignment = {"x": x, "y": y}
                    assignment.update({p: pad_val for p in pads})
                    best = min(best, eval_instance(rewritten, collapsed, assignment))
                assert best == base + offset
