"""Spline modules on edge-labeled graphs.

A spline assigns a ring element to every vertex so that across each edge
the difference of endpoint values lies in the edge's ideal.  This module
computes generating sets and structural invariants of the full module of
such tuples, of its based submodules (splines vanishing on a chosen
vertex set), and implements the pullback of splines along contractions
("vertex expansion") together with flow-up generating sets on trees.

Solver strategy, shared by all ring families: introduce one unknown per
vertex plus one auxiliary unknown per (edge, ideal generator) pair; each
edge contributes the linear relation

    p_u - p_v - sum_j c_j * g_j = 0

in the additive presentation of the ring.  Kernels are computed exactly
(integer kernel, F_p nullspace, or rational nullspace), projected onto
the vertex coordinates, and canonicalized.  Over Z/nZ the projected
lattice L of integer lifts contains n*Z^V; the module structure is read
off the Smith normal form of the matrix expressing n*Z^V in a basis of
L, and the count of nontrivial invariant factors is cross-checked against
the rank of the same matrix modulo a prime divisor of n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exactlinalg
from .errors import (
    BadContraction,
    BadVertex,
    ConsistencyError,
    GraphMismatch,
    NotATree,
    ShapeMismatch,
    TooSmall,
    UnsupportedRing,
)
from .exactlinalg import IntMatrix
from .graphs import (
    Contraction,
    LabeledGraph,
    PlaneRootedStructure,
    contract_edges,
    depth_first_order,
    genus,
    subtree_blocks,
    validate_contraction,
)
from .rings import (
    IntegerRing,
    ModularRing,
    PrimeField,
    RingElement,
    TruncatedPolynomialRing,
)


@dataclass(frozen=True)
class Spline:
    """A vertex-indexed tuple of ring elements satisfying the edge conditions."""

    graph: LabeledGraph
    values: tuple[RingElement, ...]


@dataclass(frozen=True)
class FieldDim:
    dimension: int


@dataclass(frozen=True)
class FreeRank:
    rank: int


@dataclass(frozen=True)
class InvariantFactors:
    factors: tuple[int, ...]


@dataclass(frozen=True)
class SplineModule:
    """Generators plus structure data for a module of splines.

    z_rank is the size of a smallest generating set of the underlying
    abelian group: the dimension over a field, the free rank over Z, and
    the number of invariant factors over Z/nZ.
    """

    graph: LabeledGraph
    generators: tuple[Spline, ...]
    structure: FieldDim | FreeRank | InvariantFactors
    z_rank: int


def make_spline(G: LabeledGraph, values) -> Spline:
    """Coerce raw values into ring elements and wrap them as a spline."""
    if len(values) != G.vertex_count:
        raise ShapeMismatch(
            f"expected {G.vertex_count} values, got {len(values)}"
        )
    return Spline(G, tuple(G.ring.element(v) for v in values))


def constant_spline(G: LabeledGraph, value=1) -> Spline:
    elem = G.ring.element(value)
    return Spline(G, (elem,) * G.vertex_count)


def indicator_values(G: LabeledGraph, u: int) -> tuple[RingElement, ...]:
    """The u-th coordinate vector of the ambient module (not generally a spline)."""
    one, zero = G.ring.one, G.ring.zero
    return tuple(one if v == u else zero for v in range(G.vertex_count))


def is_spline(G: LabeledGraph, values) -> bool:
    """Whether every edge condition holds; loops impose nothing."""
    from .rings import ideal_membership

    if len(values) != G.vertex_count:
        raise ShapeMismatch(
            f"expected {G.vertex_count} values, got {len(values)}"
        )
    for a, b, l in G.edges:
        if a == b:
            continue
        if not ideal_membership(values[a] - values[b], G.label_set[l]):
            return False
    return True


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


def _integer_rows(G: LabeledGraph, based, modulus: int | None):
    """Edge relation rows over Z; returns (rows, total column count).

    Columns 0..V-1 are the vertex unknowns.  Auxiliary columns follow:
    one per (edge, generator), plus one slack column per edge carrying
    the modulus when working over Z/nZ (and per based vertex).
    """
    V = G.vertex_count
    rows: list[dict[int, int]] = []
    aux = V
    for a, b, l in G.edges:
        if a == b:
            continue
        row = {a: 1, b: -1}
        for g in G.label_set[l].generators:
            row[aux] = -g.payload
            aux += 1
        if modulus is not None:
            row[aux] = -modulus
            aux += 1
        rows.append(row)
    for v in based:
        row = {v: 1}
        if modulus is not None:
            row[aux] = -modulus
            aux += 1
        rows.append(row)
    dense = []
    for row in rows:
        line = [0] * aux
        for j, c in row.items():
            line[j] = c
        dense.append(line)
    return dense, aux


def _project(vectors, V):
    return [tuple(vec[:V]) for vec in vectors]


def _integer_module(G: LabeledGraph, based) -> SplineModule:
    V = G.vertex_count
    rows, ncols = _integer_rows(G, based, None)
    matrix = (
        IntMatrix.from_rows(rows) if rows else IntMatrix.zeros(0, ncols)
    )
    kernel = exactlinalg.integer_kernel(matrix)
    basis = exactlinalg.lattice_hnf(_project(kernel, V))
    gens = tuple(
        Spline(G, tuple(G.ring.element(x) for x in row)) for row in basis
    )
    return SplineModule(G, gens, FreeRank(len(basis)), len(basis))


def _modular_lattice(G: LabeledGraph, based) -> tuple[list, IntMatrix]:
    """Hermite basis B of the lift lattice and the matrix M with rows
    expressing n*e_j in terms of B (so coker(M) is the spline module)."""
    n = G.ring.n
    V = G.vertex_count
    rows, ncols = _integer_rows(G, based, n)
    matrix = (
        IntMatrix.from_rows(rows) if rows else IntMatrix.zeros(0, ncols)
    )
    kernel = exactlinalg.integer_kernel(matrix)
    projected = _project(kernel, V)
    projected.extend(
        tuple(n if i == j else 0 for i in range(V)) for j in range(V)
    )
    basis = exactlinalg.lattice_hnf(projected)
    if len(basis) != V:
        raise ConsistencyError("lift lattice must have full rank")
    pivots = [next(k for k, x in enumerate(row) if x) for row in basis]
    columns = []
    for j in range(V):
        target = [n if i == j else 0 for i in range(V)]
        coeffs = [0] * V
        for i, row in enumerate(basis):
            c = pivots[i]
            q, r = divmod(target[c], row[c])
            if r:
                raise ConsistencyError("n*Z^V is not inside the lift lattice")
            coeffs[i] = q
            if q:
                target = [x - q * y for x, y in zip(target, row)]
        if any(target):
            raise ConsistencyError("n*Z^V is not inside the lift lattice")
        columns.append(coeffs)
    M = IntMatrix.from_rows(
        [[columns[j][i] for j in range(V)] for i in range(V)]
    )
    return basis, M


def _modular_module(G: LabeledGraph, based) -> SplineModule:
    n = G.ring.n
    basis, M = _modular_lattice(G, based)
    diag = exactlinalg.smith_normal_form(M).diagonal
    factors = tuple(sorted(d for d in diag if d > 1))
    p = G.ring.prime_power_base()
    if p is not None:
        reduction_rank = len(exactlinalg.nullspace_mod_p(M, p))
        if reduction_rank != len(factors):
            raise ConsistencyError(
                "invariant factor count disagrees with the mod-p reduction"
            )
    gens = []
    for row in basis:
        values = tuple(G.ring.element(x) for x in row)
        if any(not v.is_zero() for v in values):
            gens.append(Spline(G, values))
    return SplineModule(G, tuple(gens), InvariantFactors(factors), len(factors))


def z_rank_by_prime_reduction(G: LabeledGraph, p: int, based=()) -> int:
    """dim over F_p of (spline module) tensor Z/pZ, computed by elimination.

    For a modulus that is a power of p this equals the number of
    invariant factors, which gives an independent check of the Smith
    normal form route.
    """
    if not isinstance(G.ring, ModularRing):
        raise UnsupportedRing("prime reduction applies to Z/nZ coefficients")
    _, M = _modular_lattice(G, based)
    return len(exactlinalg.nullspace_mod_p(M, p))


def _field_context(ring):
    """(block size, prime or None) for the field-coefficient solvers."""
    if isinstance(ring, PrimeField):
        return 1, ring.p
    if isinstance(ring, TruncatedPolynomialRing):
        p = ring.base.p if isinstance(ring.base, PrimeField) else None
        return ring.coord_length, p
    raise UnsupportedRing(f"not a field-based ring: {ring!r}")


def _field_rows(G: LabeledGraph, based):
    """Edge relation rows over the base field; returns (rows, ncols, M)."""
    ring = G.ring
    M, _ = _field_context(ring)
    V = G.vertex_count
    aux_columns_per_label: dict[int, list[list]] = {}
    for l, ideal in enumerate(G.label_set):
        cols = []
        if isinstance(ring, PrimeField):
            for g in ideal.generators:
                cols.append([g.payload])
        else:
            one = ring._coeff(1)
            for g in ideal.generators:
                for mono in ring.monomials:
                    prod = ring.mul_payload(((mono, one),), g.payload)
                    col = ring.payload_coords(prod)
                    if any(col):
                        cols.append(col)
        aux_columns_per_label[l] = cols
    rows: list[list] = []
    n_aux = 0
    edge_blocks = []
    for a, b, l in G.edges:
        if a == b:
            continue
        edge_blocks.append((a, b, aux_columns_per_label[l]))
        n_aux += len(aux_columns_per_label[l])
    ncols = V * M + n_aux
    aux_base = V * M
    for a, b, cols in edge_blocks:
        for r in range(M):
            row = [0] * ncols
            row[a * M + r] += 1
            row[b * M + r] -= 1
            for k, col in enumerate(cols):
                row[aux_base + k] = -col[r]
            rows.append(row)
        aux_base += len(cols)
    for v in based:
        for r in range(M):
            row = [0] * ncols
            row[v * M + r] = 1
            rows.append(row)
    return rows, ncols, M


def _field_module(G: LabeledGraph, based) -> SplineModule:
    ring = G.ring
    M, p = _field_context(ring)
    V = G.vertex_count
    rows, ncols, _ = _field_rows(G, based)
    if p is not None:
        kernel = exactlinalg.nullspace_mod_p_rows(rows, ncols, p)
        reduced, _ = exactlinalg._rref_mod_p(
            [list(vec[: V * M]) for vec in kernel], p
        ) if kernel else ([], [])
    else:
        kernel = exactlinalg.nullspace_rational_rows(rows, ncols)
        reduced, _ = exactlinalg._rref_rational(
            [list(vec[: V * M]) for vec in kernel]
        ) if kernel else ([], [])
    gens = []
    for vec in reduced:
        if not any(vec):
            continue
        if isinstance(ring, TruncatedPolynomialRing):
            values = tuple(
                RingElement(ring, ring.payload_from_coords(vec[v * M : (v + 1) * M]))
                for v in range(V)
            )
        else:
            values = tuple(ring.element(vec[v]) for v in range(V))
        gens.append(Spline(G, values))
    dim = len(gens)
    return SplineModule(G, tuple(gens), FieldDim(dim), dim)


def based_spline_module(G: LabeledGraph, based_vertices) -> SplineModule:
    """Splines vanishing on the given vertices, with structure data."""
    based = sorted(set(based_vertices))
    for v in based:
        if not 0 <= v < G.vertex_count:
            raise BadVertex(f"vertex {v} out of range")
    ring = G.ring
    if isinstance(ring, IntegerRing):
        return _integer_module(G, based)
    if isinstance(ring, ModularRing):
        return _modular_module(G, based)
    if isinstance(ring, (PrimeField, TruncatedPolynomialRing)):
        return _field_module(G, based)
    raise UnsupportedRing(f"unsupported coefficient ring {ring!r}")


def compute_spline_module(G: LabeledGraph) -> SplineModule:
    """Generators and structure of the full module of splines on G."""
    return based_spline_module(G, ())


def module_size(m: SplineModule) -> int:
    """Smallest generating-set size of the underlying abelian group."""
    return m.z_rank


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def module_membership(
    m: SplineModule, p: Spline
) -> tuple[RingElement, ...] | None:
    """Certificate coefficients expressing p over the generators, or None.

    The returned tuple has one ring coefficient per generator; an empty
    tuple certifies the zero spline in the zero module.  (Use
    ``is not None`` to test membership.)
    """
    if p.graph != m.graph:
        raise GraphMismatch("spline and module refer to different graphs")
    ring = m.graph.ring
    k = len(m.generators)
    if isinstance(ring, IntegerRing):
        columns = [[v.payload for v in g.values] for g in m.generators]
        rows = [[col[i] for col in columns] for i in range(m.graph.vertex_count)]
        target = [v.payload for v in p.values]
        sol = exactlinalg.solve_integer(
            IntMatrix.from_rows(rows)
            if rows
            else IntMatrix.zeros(0, k),
            target,
        )
        if sol is None:
            return None
        return tuple(ring.element(c) for c in sol[:k])
    if isinstance(ring, ModularRing):
        n = ring.n
        V = m.graph.vertex_count
        columns = [[v.payload for v in g.values] for g in m.generators]
        columns += [[n if i == j else 0 for i in range(V)] for j in range(V)]
        rows = [[col[i] for col in columns] for i in range(V)]
        target = [v.payload for v in p.values]
        sol = exactlinalg.solve_integer(IntMatrix.from_rows(rows), target)
        if sol is None:
            return None
        return tuple(ring.element(c) for c in sol[:k])
    if isinstance(ring, PrimeField):
        columns = [[v.payload for v in g.values] for g in m.generators]
        rows = [[col[i] for col in columns] for i in range(m.graph.vertex_count)]
        target = [v.payload for v in p.values]
        sol = exactlinalg.solve_mod_p_rows(rows, k, target, ring.p)
        if sol is None:
            return None
        return tuple(ring.element(c) for c in sol)
    if isinstance(ring, TruncatedPolynomialRing):
        return _truncpoly_module_membership(m, p)
    raise UnsupportedRing(f"unsupported coefficient ring {ring!r}")


def _truncpoly_module_membership(m, p):
    ring = m.graph.ring
    one = ring._coeff(1)
    columns = []
    meta = []
    for gi, g in enumerate(m.generators):
        for mono in ring.monomials:
            col: list = []
            zero_col = True
            for v in g.values:
                prod = ring.mul_payload(((mono, one),), v.payload)
                part = ring.payload_coords(prod)
                if any(part):
                    zero_col = False
                col.extend(part)
            if not zero_col:
                columns.append(col)
                meta.append((gi, mono))
    nrows = m.graph.vertex_count * ring.coord_length
    rows = [[col[i] for col in columns] for i in range(nrows)]
    target: list = []
    for v in p.values:
        target.extend(v.coords())
    if isinstance(ring.base, PrimeField):
        sol = exactlinalg.solve_mod_p_rows(rows, len(columns), target, ring.base.p)
    else:
        sol = exactlinalg.solve_rational_rows(rows, len(columns), target)
    if sol is None:
        return None
    parts: list[list] = [[] for _ in m.generators]
    for (gi, mono), c in zip(meta, sol):
        if c:
            parts[gi].append((c, mono))
    return tuple(ring.element(part) for part in parts)


def spline_span_basis(splines) -> list[tuple]:
    """Canonical description of the span of integer-coefficient splines.

    Over Z this is the Hermite basis of the value lattice; two generating
    sets span the same module exactly when these bases coincide.
    """
    if not splines:
        return []
    ring = splines[0].graph.ring
    if not isinstance(ring, IntegerRing):
        raise UnsupportedRing("span basis comparison is for Z coefficients")
    return exactlinalg.lattice_hnf(
        [tuple(v.payload for v in s.values) for s in splines]
    )


# ---------------------------------------------------------------------------
# constants and based parts
# ---------------------------------------------------------------------------


def split_spline(p: Spline, v: int) -> tuple[Spline, Spline]:
    """Decompose p as (constant part p_v * 1, based part p - p_v * 1)."""
    if not 0 <= v < p.graph.vertex_count:
        raise BadVertex(f"vertex {v} out of range")
    pv = p.values[v]
    const = Spline(p.graph, (pv,) * p.graph.vertex_count)
    based = Spline(p.graph, tuple(x - pv for x in p.values))
    return const, based


def split_off_constants(
    m: SplineModule, v: int
) -> tuple[tuple[Spline, ...], tuple[Spline, ...]]:
    """Generators of the constant summand and of the part based at v."""
    if not 0 <= v < m.graph.vertex_count:
        raise BadVertex(f"vertex {v} out of range")
    constant = (constant_spline(m.graph, 1),)
    based = []
    for g in m.generators:
        _, b = split_spline(g, v)
        if any(not x.is_zero() for x in b.values):
            based.append(b)
    return constant, tuple(based)


# ---------------------------------------------------------------------------
# vertex expansion
# ---------------------------------------------------------------------------


def expand_values(c: Contraction, values) -> tuple:
    """Pull back a value tuple along a contraction: w picks up its image's value."""
    return tuple(values[c.vertex_map[w]] for w in range(c.domain.vertex_count))


def vertex_expansion(c: Contraction, q: Spline) -> Spline:
    """Pull a spline on the codomain back to the domain of a contraction."""
    report = validate_contraction(c)
    if report is not None:
        raise BadContraction(report)
    if q.graph != c.codomain:
        raise GraphMismatch("spline does not live on the contraction codomain")
    if not is_spline(q.graph, q.values):
        raise ShapeMismatch("input values do not satisfy the spline condition")
    return Spline(c.domain, expand_values(c, q.values))


# ---------------------------------------------------------------------------
# flow-up structure
# ---------------------------------------------------------------------------


def is_flow_up(p: Spline, order, v: int) -> bool:
    """True when p vanishes on every vertex strictly before v in the order."""
    order = tuple(order)
    if sorted(order) != list(range(p.graph.vertex_count)):
        raise ShapeMismatch("order must be a permutation of the vertices")
    for w in order:
        if w == v:
            return True
        if not p.values[w].is_zero():
            return False
    raise BadVertex(f"vertex {v} not present in the order")


def leading_vertex(p: Spline, order) -> int | None:
    """First vertex in the order where p is nonzero, or None for zero."""
    for w in order:
        if not p.values[w].is_zero():
            return w
    return None


def tree_flow_up_generators(
    T: LabeledGraph, s: PlaneRootedStructure
) -> list[Spline]:
    """Flow-up generating set of the spline module of a tree.

    The set consists of the all-ones spline together with, for every
    non-root vertex v and every generator g of the ideal on the tree edge
    entering v, the spline equal to g on the subtree below v and zero
    elsewhere.  All outputs are flow-up for the depth-first order of s.
    """
    if genus(T) != 0:
        raise NotATree("flow-up tree generators need a genus-zero graph")
    order, sizes, entering = subtree_blocks(T, s)
    position = {v: i for i, v in enumerate(order)}
    out = [constant_spline(T, 1)]
    zero = T.ring.zero
    for v in order:
        if v == s.root:
            continue
        edge_idx = entering[v]
        ideal = T.label_set[T.edges[edge_idx][2]]
        block = set(order[position[v] : position[v] + sizes[v]])
        for g in ideal.generators:
            values = tuple(
                g if w in block else zero for w in range(T.vertex_count)
            )
            out.append(Spline(T, values))
    return out


# ---------------------------------------------------------------------------
# indicators via contractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndicatorWitness:
    """Contractions and coefficients whose expansions sum to an indicator.

    Each term is (contraction, codomain vertex, coefficient); replaying
    sums coefficient * expansion(indicator of the codomain vertex) inside
    the ambient module of all vertex tuples.
    """

    graph: LabeledGraph
    vertex: int
    terms: tuple[tuple[Contraction, int, RingElement], ...]
    case: str


def replay_indicator_witness(w: IndicatorWitness) -> tuple[RingElement, ...]:
    G = w.graph
    total = [G.ring.zero] * G.vertex_count
    for contraction, codomain_vertex, coeff in w.terms:
        ind = indicator_values(contraction.codomain, codomain_vertex)
        expanded = expand_values(contraction, ind)
        total = [t + coeff * x for t, x in zip(total, expanded)]
    return tuple(total)


def indicator_in_contraction_span(G: LabeledGraph, u: int) -> IndicatorWitness:
    """Express the indicator of u through expansions from smaller graphs.

    Either a single non-loop edge avoiding u is contracted (the indicator
    of u's image pulls back to the indicator of u), or -- when every
    non-loop edge touches u, i.e. the graph is a star centered at u --
    the difference of two expansions is returned.
    """
    if G.vertex_count < 3:
        raise TooSmall("needs at least three vertices")
    if not 0 <= u < G.vertex_count:
        raise BadVertex(f"vertex {u} out of range")
    one = G.ring.one
    avoiding = next(
        (
            i
            for i, (a, b, _) in enumerate(G.edges)
            if a != b and u not in (a, b)
        ),
        None,
    )
    if avoiding is not None:
        _, c = contract_edges(G, {avoiding})
        witness = IndicatorWitness(
            G, u, ((c, c.vertex_map[u], one),), "avoiding-edge"
        )
    else:
        # star centered at u: pick a neighbor v along the lowest-index edge
        first = next(
            (i for i, (a, b, _) in enumerate(G.edges) if a != b), None
        )
        if first is None:
            raise TooSmall("no non-loop edge exists")
        a, b, _ = G.edges[first]
        v = b if a == u else a
        # contract one edge per leaf other than v (an acyclic set)
        spokes = {}
        for i, (x, y, _) in enumerate(G.edges):
            if x == y:
                continue
            leaf = y if x == u else x
            if leaf != v and leaf not in spokes:
                spokes[leaf] = i
        _, c_rest = contract_edges(G, set(spokes.values()))
        _, c_uv = contract_edges(G, {first})
        witness = IndicatorWitness(
            G,
            u,
            (
                (c_uv, c_uv.vertex_map[u], one),
                (c_rest, c_rest.vertex_map[v], -one),
            ),
            "star",
        )
    if replay_indicator_witness(witness) != indicator_values(G, u):
        raise ConsistencyError("witness replay failed to reproduce the indicator")
    return witness
