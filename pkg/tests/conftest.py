"""Shared fixtures: the worked two-letter example language and friends."""

from __future__ import annotations

from fractions import Fraction

import pytest

from costhom import Cost, Constraint, VCSPInstance, WeightedRelation, WeightedStructure


@pytest.fixture
def swap_relation() -> WeightedRelation:
    """Binary relation on {0,1}: (0,1) costs 2, (1,0) costs 1, rest undefined."""
    return WeightedRelation(
        2,
        ("0", "1"),
        {("0", "1"): Cost.of(2), ("1", "0"): Cost.of(1)},
    )


@pytest.fixture
def swap_structure(swap_relation) -> WeightedStructure:
    return WeightedStructure(("0", "1"), {"rho": swap_relation})


@pytest.fixture
def swap_instance() -> VCSPInstance:
    return VCSPInstance(
        ("x", "y"),
        (Constraint("rho", ("x", "y"), Cost.of(1)),),
    )


@pytest.fixture
def maxcut_relation() -> WeightedRelation:
    """The 0/1 cut relation: cut pairs cost 0, uncut pairs cost 1."""
    return WeightedRelation(
        2,
        ("0", "1"),
        {
            ("0", "0"): Cost.of(1),
            ("1", "1"): Cost.of(1),
            ("0", "1"): Cost.of(0),
            ("1", "0"): Cost.of(0),
        },
    )
