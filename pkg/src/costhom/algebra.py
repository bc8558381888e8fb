"""Polymorphisms, weighted polymorphisms, identities, and their transfer.

The transfer machinery extends every non-projection operation of the source
domain to the encoding's vertices through a case analysis over the diagonal
component of the corresponding direct power: componentwise application on
the outer levels, block-aligned zigzag meets inside the diagonal component,
and the global vertex-order minimum everywhere else.  Projections extend to
projections and weights are carried over unchanged.  Every extension is
re-verified exhaustively (edge preservation, top-level containment, the
weighted inequality against the unary function, and any built-in balanced
linear identities the source carrier satisfied).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .costs import WeightedRelation, WeightedStructure
from .digraphs import Digraph
from .encoding import EncodedDigraph, base_name, tuple_name
from .errors import (
    LemmaCheckError,
    PolymorphismCheckError,
    RangeLeakError,
    SizeGuardError,
    StructureError,
    TotalityViolationError,
    TransferVerificationError,
)

POWER_SIZE_GUARD = 300_000


@dataclass(frozen=True)
class Operation:
    """A finitary operation given by its explicit table."""

    arity: int
    domain: tuple[str, ...]
    table: Mapping[tuple[str, ...], str]

    def __post_init__(self):
        domain = tuple(self.domain)
        object.__setattr__(self, "domain", domain)
        if self.arity < 1:
            raise StructureError("operation arity must be positive")
        expected = len(domain) ** self.arity
        if len(self.table) != expected:
            raise StructureError(
                f"table has {len(self.table)} rows, expected {expected}"
            )
        carrier = set(domain)
        for key, value in self.table.items():
            if len(key) != self.arity or not set(key) <= carrier or value not in carrier:
                raise StructureError(f"bad table row {key!r} -> {value!r}")

    def __call__(self, *args: str) -> str:
        return self.table[args]

    @staticmethod
    def projection(arity: int, coordinate: int, domain: Sequence[str]) -> "Operation":
        """The projection onto the given 1-based coordinate."""
        domain = tuple(domain)
        table = {
            key: key[coordinate - 1]
            for key in itertools.product(domain, repeat=arity)
        }
        return Operation(arity, domain, table)

    @staticmethod
    def from_callable(arity: int, domain: Sequence[str], fn) -> "Operation":
        domain = tuple(domain)
        return Operation(
            arity,
            domain,
            {key: fn(*key) for key in itertools.product(domain, repeat=arity)},
        )

    def projection_coordinate(self) -> int | None:
        """The 1-based coordinate this operation projects onto, if any."""
        for i in range(self.arity):
            if all(key[i] == value for key, value in self.table.items()):
                return i + 1
        return None

    @property
    def is_projection(self) -> bool:
        return self.projection_coordinate() is not None

    def is_idempotent(self) -> bool:
        return all(self.table[(x,) * self.arity] == x for x in self.domain)


def is_polymorphism(op: Operation, target: WeightedRelation | Digraph) -> bool:
    """Whether the operation preserves the relation's key set or the edges."""
    if isinstance(target, WeightedRelation):
        if tuple(op.domain) != tuple(target.domain):
            raise StructureError("operation and relation domains differ")
        keys = set(target.tuples())
        rows = target.tuples()
        width = target.arity
    else:
        if set(op.domain) != set(target.vertices):
            raise StructureError("operation and digraph carriers differ")
        keys = set(target.edges)
        rows = tuple(target.edges)
        width = 2
    for combo in itertools.product(rows, repeat=op.arity):
        image = tuple(op(*(row[j] for row in combo)) for j in range(width))
        if image not in keys:
            return False
    return True


@dataclass(frozen=True)
class WpolViolation:
    """Why a weighted operation set fails on a relation."""

    kind: str  # "not-a-polymorphism" | "inequality"
    operation_index: int | None
    argument_rows: tuple[tuple[str, ...], ...] | None
    value: Fraction | None = None


@dataclass(frozen=True)
class WeightedOperationSet:
    """Same-arity operations with rational weights summing to zero.

    Negative weight is only allowed on projections.
    """

    operations: tuple[Operation, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ops = tuple(self.operations)
        weights = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "operations", ops)
        object.__setattr__(self, "weights", weights)
        if not ops:
            raise StructureError("the carrier must be non-empty")
        if len(ops) != len(weights):
            raise StructureError("one weight per operation")
        if len({op.arity for op in ops}) != 1:
            raise StructureError("carrier operations must share one arity")
        if len({op.domain for op in ops}) != 1:
            raise StructureError("carrier operations must share one domain")
        if sum(weights) != 0:
            raise StructureError("weights must sum to zero")
        for op, w in zip(ops, weights):
            if w < 0 and not op.is_projection:
                raise StructureError("negative weight on a non-projection")

    @property
    def arity(self) -> int:
        return self.operations[0].arity

    @property
    def domain(self) -> tuple[str, ...]:
        return self.operations[0].domain


def check_weighted_polymorphism(
    wos: WeightedOperationSet, rho: WeightedRelation
) -> WpolViolation | None:
    """None when the set is a weighted polymorphism of the relation."""
    for idx, (op, w) in enumerate(zip(wos.operations, wos.weights)):
        if w != 0 and not is_polymorphism(op, rho):
            return WpolViolation("not-a-polymorphism", idx, None)
    rows = rho.tuples()
    k = wos.arity
    for combo in itertools.product(rows, repeat=k):
        total = Fraction(0)
        for op, w in zip(wos.operations, wos.weights):
            if w == 0:
                continue
            image = tuple(op(*(row[j] for row in combo)) for j in range(rho.arity))
            total += w * rho.entries[image].as_fraction()
        if total > 0:
            return WpolViolation("inequality", None, combo, total)
    return None


def is_weighted_polymorphism(wos: WeightedOperationSet, rho: WeightedRelation) -> bool:
    return check_weighted_polymorphism(wos, rho) is None


def submodular_operation_set(domain: Sequence[str]) -> WeightedOperationSet:
    """Join, meet and both projections with weights (1, 1, -1, -1).

    The domain order is taken as the chain order; a binary relation has this
    weighted polymorphism exactly when it is submodular over that chain.
    """
    domain = tuple(domain)
    rank = {d: i for i, d in enumerate(domain)}
    join = Operation.from_callable(2, domain, lambda a, b: a if rank[a] >= rank[b] else b)
    meet = Operation.from_callable(2, domain, lambda a, b: a if rank[a] <= rank[b] else b)
    return WeightedOperationSet(
        (
            join,
            meet,
            Operation.projection(2, 1, domain),
            Operation.projection(2, 2, domain),
        ),
        (Fraction(1), Fraction(1), Fraction(-1), Fraction(-1)),
    )


def is_submodular(rho: WeightedRelation) -> bool:
    """Brute-force submodularity over the domain chain, infinities included.

    Checks join/meet dominance directly from the definition, treating
    missing tuples as infinite.
    """
    domain = rho.domain
    rank = {d: i for i, d in enumerate(domain)}

    def join(a, b):
        return tuple(x if rank[x] >= rank[y] else y for x, y in zip(a, b))

    def meet(a, b):
        return tuple(x if rank[x] <= rank[y] else y for x, y in zip(a, b))

    universe = list(itertools.product(domain, repeat=rho.arity))
    for a in universe:
        for b in universe:
            left = rho.weight(join(a, b)), rho.weight(meet(a, b))
            right = rho.weight(a), rho.weight(b)
            if right[0] is None or right[1] is None:
                continue
            if left[0] is None or left[1] is None:
                return False
            if (
                left[0].as_fraction() + left[1].as_fraction()
                > right[0].as_fraction() + right[1].as_fraction()
            ):
                return False
    return True


# ---------------------------------------------------------------------------
# Identities


Term = tuple[str | None, tuple[str, ...]]  # (symbol or None for a bare variable, vars)


@dataclass(frozen=True)
class IdentitySet:
    """Linear identities over an operational signature."""

    symbols: Mapping[str, int]
    identities: tuple[tuple[Term, Term], ...]

    def __post_init__(self):
        for lhs, rhs in self.identities:
            for symbol, variables in (lhs, rhs):
                if symbol is None:
                    if len(variables) != 1:
                        raise StructureError("a bare side must be one variable")
                elif symbol not in self.symbols:
                    raise StructureError(f"unknown symbol {symbol!r}")
                elif len(variables) != self.symbols[symbol]:
                    raise StructureError(f"arity mismatch for {symbol!r}")

    @property
    def is_balanced(self) -> bool:
        return all(
            set(lhs[1]) == set(rhs[1]) for lhs, rhs in self.identities
        )


def idempotent_identities(symbol="f", arity=2) -> IdentitySet:
    return IdentitySet(
        {symbol: arity},
        (((symbol, ("x",) * arity), (None, ("x",))),),
    )


def wnu_identities(symbol="f", arity=2) -> IdentitySet:
    """Idempotency plus equality of all one-off applications."""
    variables = [
        tuple("y" if j == i else "x" for j in range(arity)) for i in range(arity)
    ]
    identities = [((symbol, ("x",) * arity), (None, ("x",)))]
    for a, b in zip(variables, variables[1:]):
        identities.append(((symbol, a), (symbol, b)))
    return IdentitySet({symbol: arity}, tuple(identities))


def cyclic_identities(symbol="f", arity=2) -> IdentitySet:
    xs = tuple(f"x{i}" for i in range(arity))
    rotated = xs[1:] + xs[:1]
    return IdentitySet({symbol: arity}, (((symbol, xs), (symbol, rotated)),))


def symmetric_identities(symbol="f", arity=2) -> IdentitySet:
    xs = tuple(f"x{i}" for i in range(arity))
    identities = tuple(
        ((symbol, xs), (symbol, tuple(xs[i] for i in perm)))
        for perm in itertools.permutations(range(arity))
        if perm != tuple(range(arity))
    )
    return IdentitySet({symbol: arity}, identities)


@dataclass(frozen=True)
class FailingInstantiation:
    identity: tuple[Term, Term]
    valuation: Mapping[str, str]
    lhs_value: str
    rhs_value: str


def check_identities(
    ops: Mapping[str, Operation], sigma: IdentitySet
) -> FailingInstantiation | None:
    """Exhaustively check every identity; None when all hold."""
    for symbol, arity in sigma.symbols.items():
        if symbol not in ops:
            raise StructureError(f"no operation bound to {symbol!r}")
        if ops[symbol].arity != arity:
            raise StructureError(f"operation bound to {symbol!r} has wrong arity")
    domains = {op.domain for op in ops.values()}
    if len(domains) != 1:
        raise StructureError("all operations must share one carrier")
    (domain,) = domains

    def evaluate(term: Term, valuation: Mapping[str, str]) -> str:
        symbol, variables = term
        if symbol is None:
            return valuation[variables[0]]
        return ops[symbol](*(valuation[x] for x in variables))

    for identity in sigma.identities:
        lhs, rhs = identity
        variables = sorted(set(lhs[1]) | set(rhs[1]))
        for values in itertools.product(domain, repeat=len(variables)):
            valuation = dict(zip(variables, values))
            left = evaluate(lhs, valuation)
            right = evaluate(rhs, valuation)
            if left != right:
                return FailingInstantiation(identity, valuation, left, right)
    return None


def satisfies(ops: Mapping[str, Operation], sigma: IdentitySet) -> bool:
    return check_identities(ops, sigma) is None


# ---------------------------------------------------------------------------
# Unary polymorphisms, cores


def unary_polymorphisms(
    target: WeightedStructure | Digraph,
    size_guard: int = 1_000_000,
) -> list[Operation]:
    """Exhaustive table enumeration over the carrier; guarded by size."""
    if isinstance(target, WeightedStructure):
        domain = target.domain
        if len(domain) ** len(domain) > size_guard:
            raise SizeGuardError("unary enumeration exceeds the size guard")
        result = []
        for values in itertools.product(domain, repeat=len(domain)):
            table = dict(zip(domain, values))
            op = Operation(1, domain, {(d,): table[d] for d in domain})
            if all(
                is_polymorphism(op, rho) for rho in target.relations.values()
            ):
                result.append(op)
        return result
    vertices = target.vertices
    if len(vertices) ** len(vertices) > size_guard:
        # table enumeration would blow up: backtrack over the edge structure
        from .oracles import enumerate_homomorphisms

        homs = enumerate_homomorphisms(target, target)
        return [
            Operation(1, vertices, {(v,): h[v] for v in vertices}) for h in homs
        ]
    result = []
    for values in itertools.product(vertices, repeat=len(vertices)):
        table = dict(zip(vertices, values))
        if all((table[a], table[b]) in target.edges for a, b in target.edges):
            result.append(Operation(1, vertices, {(v,): table[v] for v in vertices}))
    return result


def is_core(target: WeightedStructure | Digraph, **kwargs) -> bool:
    """All unary polymorphisms are bijections."""
    ops = unary_polymorphisms(target, **kwargs)
    return all(len(set(op.table.values())) == len(op.domain) for op in ops)


def is_rigid_core(target: WeightedStructure | Digraph, **kwargs) -> bool:
    """The identity is the only unary polymorphism."""
    ops = unary_polymorphisms(target, **kwargs)
    return all(all(op(x) == x for x in op.domain) for op in ops)


# ---------------------------------------------------------------------------
# The vertex order on an encoding


@dataclass(frozen=True)
class VertexOrder:
    """The total order on encoding vertices: by level, then by the least
    sketch edge whose path contains the vertex, then by distance from that
    path's initial vertex."""

    eps: Mapping[str, tuple[str, tuple[str, ...]]]
    key: Mapping[str, tuple[int, int, int]]

    def minimum(self, vertices: Iterable[str]) -> str:
        return min(vertices, key=lambda v: self.key[v])

    def less(self, a: str, b: str) -> bool:
        return self.key[a] < self.key[b]


def build_vertex_order(enc: EncodedDigraph) -> VertexOrder:
    d_rank = {d: i for i, d in enumerate(enc.domain)}
    r_rank = {r: i for i, r in enumerate(enc.tuples)}
    edge_rank = {
        (d, r): d_rank[d] * len(enc.tuples) + r_rank[r]
        for d in enc.domain
        for r in enc.tuples
    }
    eps: dict[str, tuple[str, tuple[str, ...]]] = {}
    pos: dict[str, int] = {}
    for d in enc.domain:
        for r in enc.tuples:
            names = enc.paths[(d, r)]
            for i, v in enumerate(names):
                e = (d, r)
                if v not in eps or edge_rank[e] < edge_rank[eps[v]]:
                    eps[v] = e
                    pos[v] = i
    key = {
        v: (enc.lvl[v], edge_rank[eps[v]], pos[v]) for v in enc.graph.vertices
    }
    if len(set(key.values())) != len(key):
        raise TotalityViolationError("vertex order keys collide")
    return VertexOrder(eps, key)


# ---------------------------------------------------------------------------
# Diagonal power components


def diagonal_component(enc: EncodedDigraph, k: int) -> frozenset[tuple[str, ...]]:
    """The weakly connected component of the k-th power holding the diagonal.

    Post-checks the cited power lemmas: the outer-level powers are inside,
    every member is level-aligned, and any level-aligned tuple outside is
    isolated.
    """
    vertices = enc.graph.vertices
    if len(vertices) ** k > POWER_SIZE_GUARD:
        raise SizeGuardError(f"|V|^{k} exceeds the power size guard")
    out = {v: tuple(enc.graph.out_neighbors(v)) for v in vertices}
    inc = {v: tuple(enc.graph.in_neighbors(v)) for v in vertices}
    seen: set[tuple[str, ...]] = set()
    queue: deque[tuple[str, ...]] = deque()
    for v in vertices:
        diag = (v,) * k
        seen.add(diag)
        queue.append(diag)
    while queue:
        c = queue.popleft()
        for combo in itertools.product(*(out[v] for v in c)):
            if combo not in seen:
                seen.add(combo)
                queue.append(combo)
        for combo in itertools.product(*(inc[v] for v in c)):
            if combo not in seen:
                seen.add(combo)
                queue.append(combo)
    component = frozenset(seen)

    for d_tuple in itertools.product(enc.base_vertices(), repeat=k):
        if d_tuple not in component:
            raise LemmaCheckError(f"base power tuple {d_tuple} escaped the diagonal part")
    for r_tuple in itertools.product(enc.tuple_vertices(), repeat=k):
        if r_tuple not in component:
            raise LemmaCheckError(f"top power tuple {r_tuple} escaped the diagonal part")
    for c in component:
        if len({enc.lvl[v] for v in c}) != 1:
            raise LemmaCheckError(f"diagonal component member {c} is not level-aligned")
    if len(vertices) ** k <= 50_000:
        by_level: dict[int, list[str]] = {}
        for v in vertices:
            by_level.setdefault(enc.lvl[v], []).append(v)
        for level, vs in by_level.items():
            for c in itertools.product(vs, repeat=k):
                if c in component:
                    continue
                has_out = all(out[v] for v in c)
                has_in = all(inc[v] for v in c)
                if has_out or has_in:
                    raise LemmaCheckError(
                        f"level-aligned tuple {c} outside the diagonal part is not isolated"
                    )
    return component


# ---------------------------------------------------------------------------
# Extension of operations to the encoding


def _block_data(enc: EncodedDigraph):
    """Per path: block spans, per-vertex inclusive block sets, zigzag frames."""
    spans: dict[tuple[str, tuple[str, ...]], list] = {}
    blocks_of: dict[str, dict[tuple[str, tuple[str, ...]], frozenset[int]]] = {}
    for d in enc.domain:
        for r in enc.tuples:
            path = enc.path_object(d, r)
            spans[(d, r)] = path.blocks
            for v in path.names:
                blocks_of.setdefault(v, {})[(d, r)] = path.blocks_of(v)
    return spans, blocks_of


def extend_operation(
    op: Operation,
    enc: EncodedDigraph,
    order: VertexOrder,
    delta: frozenset[tuple[str, ...]] | None = None,
    check: bool = True,
) -> Operation:
    """Extend a non-projection polymorphism of the relation to the encoding.

    Every argument tuple is dispatched: componentwise application on the
    all-base and all-top tuples, block-aligned transport inside the diagonal
    component, the order minimum outside it.  With ``check`` the result is
    verified to preserve the edges and to avoid leaking into the top level.
    """
    if op.is_projection:
        raise StructureError("projections extend to projections; pass non-projections")
    if tuple(op.domain) != tuple(enc.domain):
        raise StructureError("operation must live on the encoding's source domain")
    source = WeightedRelation(
        enc.n, enc.domain, {r: enc.u_support[tuple_name(r)] for r in enc.tuples}
    )
    if not is_polymorphism(op, source):
        raise StructureError("only polymorphisms of the relation extend")
    rho_keys = set(enc.tuples)
    k = op.arity
    vertices = enc.graph.vertices
    if len(vertices) ** k > POWER_SIZE_GUARD:
        raise SizeGuardError(f"|V|^{k} exceeds the power size guard")
    if delta is None:
        delta = diagonal_component(enc, k)
    spans, blocks_of = _block_data(enc)
    base_of = {base_name(d): d for d in enc.domain}
    top_of = {tuple_name(r): r for r in enc.tuples}
    names = {(d, r): enc.paths[(d, r)] for d in enc.domain for r in enc.tuples}
    roles = enc.roles

    def apply_on_tops(args: tuple[tuple[str, ...], ...]) -> tuple[str, ...]:
        image = tuple(op(*(r[j] for r in args)) for j in range(enc.n))
        if image not in rho_keys:
            raise PolymorphismCheckError(
                f"componentwise image {image} left the relation"
            )
        return image

    def sketch_apply(es: Sequence[tuple[str, tuple[str, ...]]]):
        d = op(*(e[0] for e in es))
        r = apply_on_tops(tuple(e[1] for e in es))
        return (d, r)

    def value(c: tuple[str, ...]) -> str:
        if all(v in base_of for v in c):
            return base_name(op(*(base_of[v] for v in c)))
        if all(v in top_of for v in c):
            return tuple_name(apply_on_tops(tuple(top_of[v] for v in c)))
        if c in delta:
            es = [order.eps[v] for v in c]
            e = sketch_apply(es)
            common = frozenset(range(1, enc.n + 1))
            for v, ev in zip(c, es):
                common &= blocks_of[v][ev]
            if not common:
                raise LemmaCheckError(f"no common middle block for {c}")
            l = min(common)
            span_e = spans[e][l]
            path_e = names[e]
            level = enc.lvl[c[0]]
            if span_e.single:
                lo, hi = path_e[span_e.start], path_e[span_e.end]
                return lo if enc.lvl[lo] == level else hi
            zig_positions = []
            for v, ev in zip(c, es):
                span_i = spans[ev][l]
                if span_i.single:
                    continue
                offset = names[ev].index(v) - span_i.start
                zig_positions.append(offset)
            if not zig_positions:
                raise LemmaCheckError(
                    f"target block {l} is a zigzag but no argument block is, at {c}"
                )
            all_zig = all(not spans[ev][l].single for ev in es)
            if all_zig:
                z = min(zig_positions)  # the meet along the zigzag
                return path_e[span_e.start + z]
            candidates = [path_e[span_e.start + z] for z in zig_positions]
            return order.minimum(candidates)
        return order.minimum(c)

    table = {
        c: value(c) for c in itertools.product(vertices, repeat=k)
    }
    extended = Operation(k, vertices, table)
    if check:
        verify_extension(extended, enc)
    return extended


def verify_extension(extended: Operation, enc: EncodedDigraph) -> None:
    """Edge preservation and top-level containment, exhaustively."""
    k = extended.arity
    edges = tuple(enc.graph.edges)
    for combo in itertools.product(edges, repeat=k):
        image = (
            extended(*(e[0] for e in combo)),
            extended(*(e[1] for e in combo)),
        )
        if image not in enc.graph.edges:
            raise PolymorphismCheckError(
                f"extension breaks edges: {combo} -> {image}"
            )
    tops = set(enc.tuple_vertices())
    for args, value in extended.table.items():
        if value in tops and not all(v in tops for v in args):
            raise RangeLeakError(
                f"extension maps {args} into the top level at {value}"
            )


BUILTIN_TEMPLATES = (
    ("idempotent", idempotent_identities),
    ("wnu", wnu_identities),
    ("cyclic", cyclic_identities),
    ("symmetric", symmetric_identities),
)


def preserved_templates(ops: Sequence[Operation]) -> list[str]:
    """Which built-in balanced linear templates all given operations satisfy."""
    preserved = []
    for name, builder in BUILTIN_TEMPLATES:
        sigma_ok = True
        for op in ops:
            sigma = builder(arity=op.arity)
            if not satisfies({"f": op}, sigma):
                sigma_ok = False
                break
        if sigma_ok and ops:
            preserved.append(name)
    return preserved


def transfer_weighted_polymorphism(
    wos: WeightedOperationSet,
    rho: WeightedRelation,
    enc: EncodedDigraph,
    order: VertexOrder | None = None,
) -> WeightedOperationSet:
    """Carry a weighted polymorphism of the relation over to the encoding.

    Projections become projections on the vertices, non-projections are
    extended, weights stay.  The result is verified as a weighted
    polymorphism of the zero-weighted edge relation together with the unary
    function, and every built-in balanced template the non-projection
    carrier satisfied is re-checked on the extended carrier.
    """
    violation = check_weighted_polymorphism(wos, rho)
    if violation is not None:
        raise StructureError(f"input is not a weighted polymorphism: {violation}")
    if order is None:
        order = build_vertex_order(enc)
    k = wos.arity
    vertices = enc.graph.vertices
    delta = diagonal_component(enc, k)
    transferred = []
    for op in wos.operations:
        coordinate = op.projection_coordinate()
        if coordinate is not None:
            transferred.append(Operation.projection(k, coordinate, vertices))
        else:
            transferred.append(extend_operation(op, enc, order, delta=delta))
    result = WeightedOperationSet(tuple(transferred), wos.weights)

    # the weighted inequality against the unary function, exhaustively
    u = {v: enc.u(v) for v in vertices}
    for args in itertools.product(vertices, repeat=k):
        total = Fraction(0)
        for op, w in zip(result.operations, result.weights):
            if w == 0:
                continue
            total += w * u[op(*args)].as_fraction()
        if total > 0:
            raise TransferVerificationError(
                f"unary inequality fails at {args}: {total}"
            )
    # identity preservation on the non-projection carrier
    sources = [op for op in wos.operations if not op.is_projection]
    targets = [op for op in result.operations if not op.is_projection]
    for name in preserved_templates(sources):
        builder = dict(BUILTIN_TEMPLATES)[name]
        for op in targets:
            failing = check_identities({"f": op}, builder(arity=op.arity))
            if failing is not None:
                raise TransferVerificationError(
                    f"extended carrier loses {name}: {failing.valuation}"
                )
    return result
