"""Exhaustive reference solvers and equivalence checkers.

These are the trusted, slow counterparts of every polynomial routine in the
package: assignment enumeration for valued instances, backtracking
homomorphism enumeration for digraphs, and a comparison harness that checks
optimum equality (with an additive offset) between a problem and its
reduction, shrinking counterexamples greedily on failure.

The assignment budget is enforced dynamically as a cap on visited search
nodes: level pruning makes the a-priori bound |V_A|^|V_X| uselessly
pessimistic for the rigid-core searches this module has to support.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Iterable, Mapping, Sequence

from .costs import Cost, INF, ZERO, VCSPInstance, WeightedStructure, validate_instance
from .digraphs import Digraph
from .errors import BudgetExceededError, EquivalenceViolationError, SizeGuardError

if TYPE_CHECKING:  # MinCostHomInstance lives with the reductions
    from .reductions import MinCostHomInstance


@dataclass(frozen=True)
class SearchBudget:
    """Caps for the exhaustive searches; enforced before and during runs."""

    max_assignments: int = 5_000_000
    max_vertices: int = 400
    max_domain: int = 64

    def __post_init__(self):
        if self.max_assignments <= 0 or self.max_vertices <= 0 or self.max_domain <= 0:
            raise ValueError("budget fields must be positive")


DEFAULT_BUDGET = SearchBudget()


class _NodeCounter:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceededError("assignment budget exhausted")


def brute_force_vcsp(
    inst: VCSPInstance,
    structure: WeightedStructure,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> tuple[Cost, dict[str, str] | None]:
    """Exact optimum by enumerating assignments in lexicographic order.

    Only variables occurring in constraints are enumerated; the rest are
    fixed to the first domain label.  Returns ``(INF, None)`` when nothing
    is feasible; ties break to the lexicographically first assignment.
    """
    validate_instance(inst, structure)
    domain = structure.domain
    if len(domain) > budget.max_domain:
        raise SizeGuardError(f"domain size {len(domain)} exceeds budget")
    used = []
    seen = set()
    for c in inst.constraints:
        for v in c.scope:
            if v not in seen:
                seen.add(v)
                used.append(v)
    total = len(domain) ** len(used) if used else 1
    if total > budget.max_assignments:
        raise BudgetExceededError(
            f"{total} assignments exceed the budget of {budget.max_assignments}"
        )
    compiled = [
        (structure.relations[c.relation].entries,
         tuple(used.index(v) for v in c.scope),
         c.weight.as_fraction())
        for c in inst.constraints
    ]
    best_cost = INF
    best: tuple[str, ...] | None = None
    for values in itertools.product(domain, repeat=len(used)):
        cost = ZERO
        for entries, scope_idx, w in compiled:
            value = entries.get(tuple(values[i] for i in scope_idx))
            if value is None:
                cost = INF
                break
            cost = cost + value.scale(w)
        if cost < best_cost:
            best_cost = cost
            best = values
    if best is None:
        return INF, None
    assignment = {v: best[i] for i, v in enumerate(used)}
    for v in inst.variables:
        assignment.setdefault(v, domain[0])
    return best_cost, assignment


def _level_window_domains(
    x: Digraph,
    a: Digraph,
    x_lvl: Mapping[str, int] | None,
    a_lvl: Mapping[str, int] | None,
    x_components: Sequence[tuple[str, ...]] | None,
) -> dict[str, list[str]]:
    if x_lvl is None or a_lvl is None:
        return {v: list(a.vertices) for v in x.vertices}
    a_height = max(a_lvl.values(), default=0)
    window: dict[str, tuple[int, int]] = {}
    for members in x_components or [tuple(x.vertices)]:
        lo = min(x_lvl[v] for v in members)
        hi = max(x_lvl[v] for v in members)
        for v in members:
            # shift s admissible iff 0 <= lo + s and hi + s <= a_height
            window[v] = (x_lvl[v] - lo, x_lvl[v] + (a_height - hi))
    return {
        v: [w for w in a.vertices if window[v][0] <= a_lvl[w] <= window[v][1]]
        for v in x.vertices
    }


def _components(g: Digraph) -> list[tuple[str, ...]]:
    seen: set[str] = set()
    comps = []
    for root in g.vertices:
        if root in seen:
            continue
        stack = [root]
        seen.add(root)
        members = []
        while stack:
            v = stack.pop()
            members.append(v)
            for w in itertools.chain(g.out_neighbors(v), g.in_neighbors(v)):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(tuple(sorted(members, key=g.index)))
    return comps


def _search_homs(
    x: Digraph,
    a: Digraph,
    domains: dict[str, list[str]],
    counter: _NodeCounter,
    order: Sequence[str] | None = None,
):
    """Yield homomorphisms x -> a by backtracking with forward checking.

    Assigning a vertex prunes the live domains of its unassigned
    neighbours, so dead branches fail as early as the graph allows.
    """
    order = list(order if order is not None else x.vertices)
    edges = a.edges
    doms: dict[str, list[str]] = {v: list(domains[v]) for v in x.vertices}
    assignment: dict[str, str] = {}

    def extend(i: int):
        if i == len(order):
            yield dict(assignment)
            return
        v = order[i]
        for t in list(doms[v]):
            counter.spend()
            saved: list[tuple[str, list[str]]] = []
            ok = True
            for w in x.out_neighbors(v):
                if w in assignment:
                    if (t, assignment[w]) not in edges:
                        ok = False
                        break
                else:
                    old = doms[w]
                    new = [s for s in old if (t, s) in edges]
                    if len(new) != len(old):
                        saved.append((w, old))
                        doms[w] = new
                        if not new:
                            ok = False
                            break
            if ok:
                for w in x.in_neighbors(v):
                    if w in assignment:
                        if (assignment[w], t) not in edges:
                            ok = False
                            break
                    else:
                        old = doms[w]
                        new = [s for s in old if (s, t) in edges]
                        if len(new) != len(old):
                            saved.append((w, old))
                            doms[w] = new
                            if not new:
                                ok = False
                                break
            if ok:
                assignment[v] = t
                yield from extend(i + 1)
                del assignment[v]
            for w, old in reversed(saved):
                doms[w] = old

    yield from extend(0)


def iter_homomorphisms(
    x: Digraph,
    a: Digraph,
    budget: SearchBudget = DEFAULT_BUDGET,
    x_lvl: Mapping[str, int] | None = None,
    a_lvl: Mapping[str, int] | None = None,
):
    """Lazily yield homomorphisms from x to a in deterministic order."""
    if len(x.vertices) > budget.max_vertices or len(a.vertices) > budget.max_vertices:
        raise SizeGuardError("graph size exceeds the vertex budget")
    comps = _components(x) if x_lvl is not None else None
    domains = _level_window_domains(x, a, x_lvl, a_lvl, comps)
    counter = _NodeCounter(budget.max_assignments)
    yield from _search_homs(x, a, domains, counter)


def enumerate_homomorphisms(
    x: Digraph,
    a: Digraph,
    budget: SearchBudget = DEFAULT_BUDGET,
    x_lvl: Mapping[str, int] | None = None,
    a_lvl: Mapping[str, int] | None = None,
) -> list[dict[str, str]]:
    """All homomorphisms from x to a in deterministic (lexicographic) order.

    When both graphs carry levels, domains are restricted to the level
    windows each vertex can reach under some per-component shift.
    """
    return list(iter_homomorphisms(x, a, budget, x_lvl, a_lvl))


def _component_min_cost(
    sub: Digraph,
    target: Digraph,
    domains: dict[str, list[str]],
    weighted: Sequence[str],
    w_map: Mapping[str, Cost],
    u: Mapping[str, Cost],
    counter: _NodeCounter,
) -> tuple[Cost, dict[str, str]] | None:
    """Branch and bound: the weighted vertices fix the cost, the rest only
    need one extension per weighted prefix."""
    rest = [v for v in sub.vertices if v not in set(weighted)]
    order = list(weighted) + rest
    k = len(weighted)
    edges = target.edges
    doms: dict[str, list[str]] = {v: list(domains[v]) for v in sub.vertices}
    assignment: dict[str, str] = {}
    best: tuple[Cost, dict[str, str]] | None = None

    def assign(v: str, t: str) -> tuple[bool, list[tuple[str, list[str]]]]:
        saved: list[tuple[str, list[str]]] = []
        for w in sub.out_neighbors(v):
            if w in assignment:
                if (t, assignment[w]) not in edges:
                    return False, saved
            else:
                old = doms[w]
                new = [s for s in old if (t, s) in edges]
                if len(new) != len(old):
                    saved.append((w, old))
                    doms[w] = new
                    if not new:
                        return False, saved
        for w in sub.in_neighbors(v):
            if w in assignment:
                if (assignment[w], t) not in edges:
                    return False, saved
            else:
                old = doms[w]
                new = [s for s in old if (s, t) in edges]
                if len(new) != len(old):
                    saved.append((w, old))
                    doms[w] = new
                    if not new:
                        return False, saved
        return True, saved

    def restore(saved):
        for w, old in reversed(saved):
            doms[w] = old

    def first_extension(i: int) -> dict[str, str] | None:
        if i == len(order):
            return dict(assignment)
        v = order[i]
        for t in list(doms[v]):
            counter.spend()
            ok, saved = assign(v, t)
            if ok:
                assignment[v] = t
                found = first_extension(i + 1)
                del assignment[v]
                if found is not None:
                    restore(saved)
                    return found
            restore(saved)
        return None

    def extend(i: int, partial: Cost):
        nonlocal best
        if best is not None and partial >= best[0]:
            return
        if i == k:
            hom = first_extension(k)
            if hom is not None and (best is None or partial < best[0]):
                best = (partial, hom)
            return
        v = order[i]
        for t in list(doms[v]):
            counter.spend()
            ok, saved = assign(v, t)
            if ok:
                assignment[v] = t
                extend(
                    i + 1,
                    partial + u.get(t, ZERO).scale(w_map[v].as_fraction()),
                )
                del assignment[v]
            restore(saved)

    extend(0, ZERO)
    return best


def brute_force_mch(
    instance: "MinCostHomInstance",
    target: Digraph,
    u: Mapping[str, Cost],
    budget: SearchBudget = DEFAULT_BUDGET,
    instance_lvl: Mapping[str, int] | None = None,
    target_lvl: Mapping[str, int] | None = None,
) -> tuple[Cost, dict[str, str] | None]:
    """Exact minimum-cost homomorphism, exhaustive per weakly connected part.

    The objective decomposes over components, so each is searched separately
    and the minima are summed; within a component the weighted vertices are
    branched first and their accumulated cost bounds the search.  Ties break
    to the first minimum in the deterministic search order.
    """
    g = instance.graph
    if len(g.vertices) > budget.max_vertices or len(target.vertices) > budget.max_vertices:
        raise SizeGuardError("graph size exceeds the vertex budget")
    counter = _NodeCounter(budget.max_assignments)
    total = ZERO
    merged: dict[str, str] = {}
    for members in _components(g):
        sub = g.induced(members)
        sub_lvl = {v: instance_lvl[v] for v in members} if instance_lvl else None
        domains = _level_window_domains(
            sub, target, sub_lvl, target_lvl, [tuple(sub.vertices)]
        )
        weighted = [v for v in members if v in instance.weights]
        best = _component_min_cost(
            sub, target, domains, weighted, instance.weights, u, counter
        )
        if best is None:
            return INF, None
        total = total + best[0]
        merged.update(best[1])
    return total, merged


# ---------------------------------------------------------------------------
# Equivalence verification


@dataclass
class EquivalenceCase:
    """One (problem, reduced problem, offset) pair, evaluated lazily.

    ``lhs`` and ``rhs`` compute exact optima; ``offset`` is added to the rhs.
    ``shrink`` yields structurally smaller candidate cases.
    """

    case_id: str
    lhs: Callable[[], Cost]
    rhs: Callable[[], Cost]
    offset: Cost = ZERO
    shrink: Callable[[], Iterable["EquivalenceCase"]] | None = None
    describe: Callable[[], dict] | None = None


def _evaluate(case: EquivalenceCase) -> dict:
    lhs = case.lhs()
    rhs = case.rhs()
    combined = rhs + case.offset
    record = {
        "id": case.case_id,
        "status": "ok" if lhs == combined else "mismatch",
        "lhs": str(lhs),
        "rhs": str(rhs),
        "offset": str(case.offset),
    }
    return record


def _shrink(case: EquivalenceCase, rounds: int = 200) -> EquivalenceCase:
    """Greedy single-element deletion to a locally minimal failing case."""
    current = case
    for _ in range(rounds):
        if current.shrink is None:
            return current
        for candidate in current.shrink():
            try:
                if _evaluate(candidate)["status"] == "mismatch":
                    current = candidate
                    break
            except BudgetExceededError:
                continue
        else:
            return current
    return current


def verify_equivalence(
    cases: Iterable[EquivalenceCase],
    raise_on_violation: bool = False,
) -> list[dict]:
    """Evaluate each case and report one record per pair.

    With ``raise_on_violation`` the first mismatch raises
    :class:`EquivalenceViolationError` carrying a minimized counterexample.
    """
    records = []
    for case in cases:
        try:
            record = _evaluate(case)
        except BudgetExceededError as exc:
            record = {
                "id": case.case_id,
                "status": "budget_exceeded",
                "lhs": "",
                "rhs": "",
                "offset": str(case.offset),
                "detail": str(exc),
            }
        if record["status"] == "mismatch":
            minimized = _shrink(case)
            if minimized.describe is not None:
                record["minimized"] = minimized.describe()
            if raise_on_violation:
                raise EquivalenceViolationError(
                    f"case {case.case_id}: optima disagree "
                    f"(lhs {record['lhs']}, rhs {record['rhs']} + offset {record['offset']})",
                    record=record,
                    minimized=record.get("minimized"),
                )
        records.append(record)
    return records
