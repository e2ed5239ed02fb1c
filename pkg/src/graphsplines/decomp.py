"""Structure theory for spline modules: unions, bridges, and genus reduction.

A connected graph reduces to a canonical small graph of the same genus by
three kinds of genus-preserving contractions: collapsing pendant trees,
collapsing connected sets of bridges, and replacing degree-two paths by a
single edge labeled with the ideal sum of the path labels.  Each step
comes with an explicit surjection on splines (restriction, or restriction
corrected by the path offset for bridge collapses) and an explicit
section, so the spline module of the original graph decomposes as the
module of the reduced graph plus one based module per contracted piece:

    trees contribute splines based at their root,
    bridge components contribute splines based at one attachment vertex,
    degree-two paths contribute cycle splines based at the merged vertex.

Sizes (dimension over a field, free rank over Z, invariant-factor count
over Z/nZ) add up exactly across the decomposition, and that additivity
is verified on every call.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadOrder,
    ConsistencyError,
    Disconnected,
    NotABridgePath,
    NotCutVertex,
    NotDegreeTwoPath,
)
from .graphs import (
    LabeledGraph,
    find_bridges,
    genus,
    is_connected,
    is_reduced,
    plane_structure,
    depth_first_order,
)
from .rings import Ideal, ideal_sum, ideals_equal, membership_certificate
from .splinecore import (
    Spline,
    SplineModule,
    based_spline_module,
    compute_spline_module,
    constant_spline,
    is_flow_up,
    is_spline,
    leading_vertex,
    make_spline,
    module_membership,
    tree_flow_up_generators,
)


# ---------------------------------------------------------------------------
# subgraph helpers
# ---------------------------------------------------------------------------


def _induced(G: LabeledGraph, vertices, edge_indices):
    """Subgraph on the given vertices/edges with a local renumbering."""
    verts = sorted(vertices)
    local = {v: i for i, v in enumerate(verts)}
    edges = tuple(
        (local[G.edges[i][0]], local[G.edges[i][1]], G.edges[i][2])
        for i in sorted(edge_indices)
    )
    sub = LabeledGraph(G.ring, len(verts), edges, G.label_set)
    return sub, local


def _components_without(G: LabeledGraph, removed_vertices=(), removed_edges=()):
    removed_v = set(removed_vertices)
    removed_e = set(removed_edges)
    adj: dict[int, list[int]] = {
        v: [] for v in range(G.vertex_count) if v not in removed_v
    }
    for i, (a, b, _) in enumerate(G.edges):
        if i in removed_e or a in removed_v or b in removed_v:
            continue
        adj[a].append(b)
        adj[b].append(a)
    seen: set[int] = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


# ---------------------------------------------------------------------------
# one-point unions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnionPart:
    """One side of a one-point union, with its module lifted to the whole graph."""

    subgraph: LabeledGraph
    vertices: tuple[int, ...]  # original ids, sorted; local id = position
    module: SplineModule
    lifted_generators: tuple[Spline, ...]


@dataclass(frozen=True)
class OnePointUnionDecomposition:
    graph: LabeledGraph
    vertex: int
    full_part: UnionPart  # carries Spl of the first side
    based_part: UnionPart  # carries Spl of the second side, based at the vertex


def _split_at_vertex(G: LabeledGraph, v: int, side=None):
    """Partition G as two subgraphs meeting only at v."""
    if not 0 <= v < G.vertex_count:
        raise NotCutVertex(f"vertex {v} out of range")
    comps = _components_without(G, removed_vertices=(v,))
    if side is None:
        if len(comps) < 2:
            raise NotCutVertex(f"vertex {v} does not separate the graph")
        side = comps[0]
    else:
        side = set(side) - {v}
    side1 = set(side) | {v}
    side2 = (set(range(G.vertex_count)) - side1) | {v}
    edges1, edges2 = [], []
    for i, (a, b, _) in enumerate(G.edges):
        # loops at the junction go to the first side
        if a in side1 and b in side1:
            edges1.append(i)
        elif a in side2 and b in side2:
            edges2.append(i)
        else:
            raise NotCutVertex(f"edge {i} straddles the split at vertex {v}")
    g1, local1 = _induced(G, side1, edges1)
    g2, local2 = _induced(G, side2, edges2)
    return (g1, sorted(side1), local1), (g2, sorted(side2), local2)


def _expand_from_side(G, side_vertices, local, values, junction_value):
    """Values on a side pulled back to G; everything off-side copies the junction."""
    out = []
    for w in range(G.vertex_count):
        if w in local:
            out.append(values[local[w]])
        else:
            out.append(junction_value)
    return tuple(out)


def one_point_union_decompose(
    G: LabeledGraph, v: int, side=None
) -> OnePointUnionDecomposition:
    """Split splines at a separating vertex.

    Returns generators realizing the direct sum of the full module on one
    side with the module based at v on the other; the restriction of each
    lifted generator to its side reproduces the original generator.
    """
    (g1, verts1, local1), (g2, verts2, local2) = _split_at_vertex(G, v, side)
    m1 = compute_spline_module(g1)
    m2 = based_spline_module(g2, {local2[v]})
    lifted1 = []
    for gen in m1.generators:
        values = _expand_from_side(G, verts1, local1, gen.values, gen.values[local1[v]])
        if not is_spline(G, values):
            raise ConsistencyError("lifted generator is not a spline")
        lifted1.append(Spline(G, values))
    zero = G.ring.zero
    lifted2 = []
    for gen in m2.generators:
        values = _expand_from_side(G, verts2, local2, gen.values, zero)
        if not is_spline(G, values):
            raise ConsistencyError("lifted generator is not a spline")
        lifted2.append(Spline(G, values))
    # sections: restriction after expansion is the identity
    for gen, lift in zip(m1.generators, lifted1):
        if tuple(lift.values[w] for w in verts1) != gen.values:
            raise ConsistencyError("restriction does not undo the expansion")
    for gen, lift in zip(m2.generators, lifted2):
        if tuple(lift.values[w] for w in verts2) != gen.values:
            raise ConsistencyError("restriction does not undo the expansion")
    return OnePointUnionDecomposition(
        graph=G,
        vertex=v,
        full_part=UnionPart(g1, tuple(verts1), m1, tuple(lifted1)),
        based_part=UnionPart(g2, tuple(verts2), m2, tuple(lifted2)),
    )


def wedge_flow_up_basis(
    G: LabeledGraph,
    v: int,
    basis1,
    basis2,
    order1=None,
    order2=None,
    side=None,
):
    """Combine flow-up generating sets across a one-point union.

    basis1 lives on the first side (local ids), basis2 on the second;
    order2 must start at the junction, whose basis element is dropped.
    Returns (flow-up generating set on G, combined vertex order).
    """
    (g1, verts1, local1), (g2, verts2, local2) = _split_at_vertex(G, v, side)
    if order1 is None:
        order1 = depth_first_order(g1, plane_structure(g1, local1[v]))
    if order2 is None:
        order2 = depth_first_order(g2, plane_structure(g2, local2[v]))
    order1, order2 = tuple(order1), tuple(order2)
    if sorted(order1) != list(range(g1.vertex_count)):
        raise BadOrder("first order is not a permutation of the first side")
    if sorted(order2) != list(range(g2.vertex_count)):
        raise BadOrder("second order is not a permutation of the second side")
    if order2[0] != local2[v]:
        raise BadOrder("the junction must come first in the second side's order")
    at_junction = [
        q for q in basis2 if not q.values[local2[v]].is_zero()
    ]
    if len(at_junction) != 1:
        raise BadOrder(
            "need exactly one second-side element nonzero at the junction"
        )
    dropped = at_junction[0]
    combined = [verts1[w] for w in order1] + [
        verts2[w] for w in order2 if verts2[w] != v
    ]
    out = []
    for q in basis1:
        values = _expand_from_side(G, verts1, local1, q.values, q.values[local1[v]])
        out.append(Spline(G, values))
    zero = G.ring.zero
    for q in basis2:
        if q is dropped:
            continue
        values = _expand_from_side(G, verts2, local2, q.values, zero)
        out.append(Spline(G, values))
    for q in out:
        lead = leading_vertex(q, combined)
        if lead is not None and not is_flow_up(q, combined, lead):
            raise ConsistencyError("combined element is not flow-up")
    # two-way generation check against the directly computed module
    direct = compute_spline_module(G)
    span = SplineModule(G, tuple(out), direct.structure, direct.z_rank)
    for gen in direct.generators:
        if module_membership(span, gen) is None:
            raise ConsistencyError("combined set fails to generate")
    for q in out:
        if module_membership(direct, q) is None:
            raise ConsistencyError("combined element escapes the module")
    return out, tuple(combined)


# ---------------------------------------------------------------------------
# bridge paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BridgePathDecomposition:
    graph: LabeledGraph
    path_vertices: tuple[int, ...]
    side_a: UnionPart
    path_part: UnionPart  # based at the first path vertex
    side_b: UnionPart  # based at the last path vertex


def bridge_path_decompose(G: LabeledGraph, path_vertices) -> BridgePathDecomposition:
    """Split splines across a path of bridges between two subgraphs."""
    path = [int(v) for v in path_vertices]
    if len(path) < 2:
        raise NotABridgePath("a bridge path needs at least one edge")
    bridges = find_bridges(G)
    path_edges = []
    used = set()
    for x, y in zip(path, path[1:]):
        idx = next(
            (
                i
                for i, (a, b, _) in enumerate(G.edges)
                if i not in used and {a, b} == {x, y}
            ),
            None,
        )
        if idx is None:
            raise NotABridgePath(f"no edge between {x} and {y}")
        if idx not in bridges:
            raise NotABridgePath(f"edge {idx} between {x} and {y} is not a bridge")
        used.add(idx)
        path_edges.append(idx)
    interior = path[1:-1]
    for w in interior:
        if G.degree(w) != 2:
            raise NotABridgePath(f"interior vertex {w} has extra incidences")
    comps = _components_without(G, removed_vertices=interior, removed_edges=path_edges)
    side_a = next(c for c in comps if path[0] in c)
    side_b = next(c for c in comps if path[-1] in c)
    if side_a is side_b:
        raise NotABridgePath("path endpoints are not separated by the path")
    edges_a = [
        i
        for i, (a, b, _) in enumerate(G.edges)
        if i not in used and a in side_a and b in side_a
    ]
    edges_b = [
        i
        for i, (a, b, _) in enumerate(G.edges)
        if i not in used and a in side_b and b in side_b
    ]
    ga, la = _induced(G, side_a, edges_a)
    gb, lb = _induced(G, side_b, edges_b)
    gp, lp = _induced(G, set(path), path_edges)
    ma = compute_spline_module(ga)
    mp = based_spline_module(gp, {lp[path[0]]})
    mb = based_spline_module(gb, {lb[path[-1]]})
    verts_a, verts_b, verts_p = sorted(side_a), sorted(side_b), sorted(set(path))
    lifted_a = []
    for gen in ma.generators:
        anchor = gen.values[la[path[0]]]
        values = tuple(
            gen.values[la[w]] if w in la else anchor for w in range(G.vertex_count)
        )
        lifted_a.append(Spline(G, values))
    lifted_p = []
    for gen in mp.generators:
        tail = gen.values[lp[path[-1]]]
        zero = G.ring.zero
        values = []
        for w in range(G.vertex_count):
            if w in lp and (w in interior or w in (path[0], path[-1])):
                values.append(gen.values[lp[w]])
            elif w in side_a:
                values.append(zero)
            else:
                values.append(tail)
        # path endpoints also belong to the sides; side values win there
        values[path[0]] = zero
        values[path[-1]] = tail
        lifted_p.append(Spline(G, tuple(values)))
    lifted_b = []
    zero = G.ring.zero
    for gen in mb.generators:
        values = tuple(
            gen.values[lb[w]] if w in lb else zero for w in range(G.vertex_count)
        )
        lifted_b.append(Spline(G, values))
    for s in lifted_a + lifted_p + lifted_b:
        if not is_spline(G, s.values):
            raise ConsistencyError("lifted generator is not a spline")
    total = compute_spline_module(G).z_rank
    if total != ma.z_rank + mp.z_rank + mb.z_rank:
        raise ConsistencyError("bridge path decomposition sizes do not add up")
    return BridgePathDecomposition(
        graph=G,
        path_vertices=tuple(path),
        side_a=UnionPart(ga, tuple(verts_a), ma, tuple(lifted_a)),
        path_part=UnionPart(gp, tuple(verts_p), mp, tuple(lifted_p)),
        side_b=UnionPart(gb, tuple(verts_b), mb, tuple(lifted_b)),
    )


# ---------------------------------------------------------------------------
# degree-two path contraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Degree2PathContraction:
    """Replacement of a degree-two path by one edge carrying the ideal sum."""

    graph: LabeledGraph
    codomain: LabeledGraph
    path_vertices: tuple[int, ...]
    path_edges: tuple[int, ...]
    vertex_map: tuple[int, ...]  # interior vertices map to the first endpoint
    new_edge_index: int | None
    summed_label: Ideal | None
    label_outside_original: bool
    cycle_graph: LabeledGraph | None
    kernel_module: SplineModule | None

    def lift_values(self, q) -> tuple:
        """Section of the restriction: fill path interiors per the ideal sum."""
        G = self.graph
        if self.new_edge_index is None:
            return tuple(q)
        path = self.path_vertices
        v0_new = self.vertex_map[path[0]]
        vk_new = self.vertex_map[path[-1]]
        delta = q[vk_new] - q[v0_new]
        cert = membership_certificate(delta, self.summed_label)
        if cert is None:
            raise ConsistencyError("restriction image violates the summed label")
        # regroup the certificate per path edge
        offsets = []
        pos = 0
        run = G.ring.zero
        for i in self.path_edges:
            ideal = G.label_set[G.edges[i][2]]
            step = G.ring.zero
            for g in ideal.generators:
                step = step + cert[pos] * g
                pos += 1
            run = run + step
            offsets.append(run)
        out = []
        for w in range(G.vertex_count):
            if w in path[1:-1]:
                idx = path.index(w)
                out.append(q[v0_new] + offsets[idx - 1])
            else:
                out.append(q[self.vertex_map[w]])
        return tuple(out)

    def lift_spline(self, q: Spline) -> Spline:
        if q.graph != self.codomain:
            raise NotDegreeTwoPath("spline does not live on the contracted graph")
        if not is_spline(q.graph, q.values):
            raise NotDegreeTwoPath("input does not satisfy the contracted conditions")
        values = self.lift_values(q.values)
        if not is_spline(self.graph, values):
            raise ConsistencyError("path lift is not a spline")
        return Spline(self.graph, values)


def contract_degree2_path(
    G: LabeledGraph, path_vertices, path_edges=None
) -> Degree2PathContraction:
    """Contract a path whose interior vertices have degree exactly two.

    The replacement edge joins the endpoints and carries the ideal sum of
    the path labels; the kernel of the restriction is the based module of
    the cycle obtained by gluing the path endpoints.
    """
    path = [int(v) for v in path_vertices]
    if len(path) < 2:
        raise NotDegreeTwoPath("a path needs at least one edge")
    interior = path[1:-1]
    if path_edges is None:
        path_edges = []
        used: set[int] = set()
        for x, y in zip(path, path[1:]):
            idx = next(
                (
                    i
                    for i, (a, b, _) in enumerate(G.edges)
                    if i not in used and {a, b} == ({x, y} if x != y else {x})
                ),
                None,
            )
            if idx is None:
                raise NotDegreeTwoPath(f"no unused edge between {x} and {y}")
            used.add(idx)
            path_edges.append(idx)
    path_edges = list(path_edges)
    for w in interior:
        if G.degree(w) != 2:
            raise NotDegreeTwoPath(f"interior vertex {w} has degree != 2")
        touching = [i for i in G.incident_edges(w)]
        if sorted(touching) != sorted(i for i in path_edges if w in G.edges[i][:2]):
            raise NotDegreeTwoPath(f"interior vertex {w} meets a non-path edge")
    if len(path) == 2:
        # nothing to contract; the restriction is the identity
        return Degree2PathContraction(
            graph=G,
            codomain=G,
            path_vertices=tuple(path),
            path_edges=tuple(path_edges),
            vertex_map=tuple(range(G.vertex_count)),
            new_edge_index=None,
            summed_label=None,
            label_outside_original=False,
            cycle_graph=None,
            kernel_module=None,
        )
    summed = G.label_set[G.edges[path_edges[0]][2]]
    for i in path_edges[1:]:
        summed = ideal_sum(summed, G.label_set[G.edges[i][2]])
    label_set = list(G.label_set)
    new_label_idx = next(
        (k for k, ideal in enumerate(label_set) if ideals_equal(ideal, summed)),
        None,
    )
    outside = new_label_idx is None
    if outside:
        new_label_idx = len(label_set)
        label_set.append(summed)
    survivors = [w for w in range(G.vertex_count) if w not in interior]
    new_id = {w: i for i, w in enumerate(survivors)}
    vertex_map = tuple(
        new_id[w] if w not in interior else new_id[path[0]]
        for w in range(G.vertex_count)
    )
    new_edges = [
        (new_id[a], new_id[b], l)
        for i, (a, b, l) in enumerate(G.edges)
        if i not in set(path_edges)
    ]
    new_edge_index = len(new_edges)
    new_edges.append((new_id[path[0]], new_id[path[-1]], new_label_idx))
    codomain = LabeledGraph(G.ring, len(survivors), tuple(new_edges), tuple(label_set))
    # kernel: the cycle on the path's edges, based at the glued endpoint
    k = len(path_edges)
    cycle_edges = []
    for j, i in enumerate(path_edges):
        a = 0 if j == 0 else j
        b = 0 if j == k - 1 else j + 1
        cycle_edges.append((a, b, G.edges[i][2]))
    cycle = LabeledGraph(G.ring, max(k - 1, 0) + 1, tuple(cycle_edges), G.label_set)
    kernel = based_spline_module(cycle, {0})
    return Degree2PathContraction(
        graph=G,
        codomain=codomain,
        path_vertices=tuple(path),
        path_edges=tuple(path_edges),
        vertex_map=vertex_map,
        new_edge_index=new_edge_index,
        summed_label=summed,
        label_outside_original=outside,
        cycle_graph=cycle,
        kernel_module=kernel,
    )


# ---------------------------------------------------------------------------
# the reduction pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeStep:
    kind = "tree"
    domain: LabeledGraph
    codomain: LabeledGraph
    vertex_map: tuple[int, ...]
    tree_vertices: tuple[int, ...]  # sorted, includes the root
    tree_edges: tuple[int, ...]
    root: int


@dataclass(frozen=True)
class BridgeStep:
    kind = "bridge"
    domain: LabeledGraph
    codomain: LabeledGraph
    vertex_map: tuple[int, ...]
    component_vertices: tuple[int, ...]  # sorted
    component_edges: tuple[int, ...]
    basepoint: int
    side_of: tuple[int, ...]  # per domain vertex, its component's anchor


@dataclass(frozen=True)
class PathStep:
    kind = "path"
    domain: LabeledGraph
    codomain: LabeledGraph
    vertex_map: tuple[int, ...]
    contraction: Degree2PathContraction


ReductionStep = TreeStep | BridgeStep | PathStep


@dataclass(frozen=True)
class ReductionResult:
    original: LabeledGraph
    reduced: LabeledGraph
    steps: tuple[ReductionStep, ...]
    vertex_map: tuple[int, ...]
    label_set_extended: bool


def _strip_leaves(G: LabeledGraph) -> set[int]:
    """Vertices removed by iterated leaf deletion (the complement of the core)."""
    alive = set(range(G.vertex_count))
    incid = {v: set(G.incident_edges(v)) for v in alive}
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            live_edges = [
                i
                for i in incid[v]
                if all(w in alive for w in G.edges[i][:2])
            ]
            deg = sum(2 if G.edges[i][0] == G.edges[i][1] else 1 for i in live_edges)
            if deg == 1:
                alive.discard(v)
                changed = True
    return set(range(G.vertex_count)) - alive


def _first_pendant_tree(G: LabeledGraph):
    """(tree vertex set incl root, tree edges, root) of the first pendant tree."""
    if G.vertex_count == 1:
        return None
    if genus(G) == 0:
        edges = tuple(range(len(G.edges)))
        return tuple(range(G.vertex_count)), edges, 0
    stripped = _strip_leaves(G)
    if not stripped:
        return None
    comps = _components_without(
        G,
        removed_vertices=set(range(G.vertex_count)) - stripped,
        removed_edges=(),
    )
    comps = [c for c in comps if c & stripped]
    comp = min(comps, key=min)
    tree_edges = [
        i for i, (a, b, _) in enumerate(G.edges) if a in comp or b in comp
    ]
    roots = {
        w
        for i in tree_edges
        for w in G.edges[i][:2]
        if w not in comp
    }
    if len(roots) != 1:
        raise ConsistencyError("pendant tree with multiple attachment points")
    root = roots.pop()
    return tuple(sorted(comp | {root})), tuple(sorted(tree_edges)), root


def _first_bridge_component(G: LabeledGraph):
    bridges = sorted(find_bridges(G))
    if not bridges:
        return None
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in bridges:
        a, b, _ = G.edges[i]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for i in bridges:
        groups.setdefault(find(G.edges[i][0]), []).append(i)
    comp_edges = min(groups.values(), key=lambda es: min(min(G.edges[i][:2]) for i in es))
    verts = sorted({w for i in comp_edges for w in G.edges[i][:2]})
    return tuple(verts), tuple(sorted(comp_edges))


def _first_degree2_chain(G: LabeledGraph):
    """Maximal chain through degree-2 vertices: (vertex path, edge list)."""
    deg2 = [
        v
        for v in range(G.vertex_count)
        if G.degree(v) == 2
        and not any(a == b == v for a, b, _ in G.edges)
    ]
    if not deg2:
        return None
    start = min(deg2)
    deg2_set = set(deg2)
    incid = {v: G.incident_edges(v) for v in range(G.vertex_count)}

    def walk(first_edge):
        path_v = [start]
        path_e = []
        v, e = start, first_edge
        while True:
            a, b, _ = G.edges[e]
            w = b if a == v else a
            path_e.append(e)
            path_v.append(w)
            if w not in deg2_set or w == start:
                return path_v, path_e
            nxt = next(i for i in incid[w] if i != e)
            v, e = w, nxt

    e1, e2 = incid[start]
    right_v, right_e = walk(e2)
    if right_v[-1] == start:
        # the whole component is a cycle; start it at the smallest vertex
        base = min(right_v)
        k = right_v.index(base)
        cyc_v = right_v[:-1]
        cyc_e = right_e
        path_v = cyc_v[k:] + cyc_v[:k] + [base]
        path_e = cyc_e[k:] + cyc_e[:k]
        return path_v, path_e
    left_v, left_e = walk(e1)
    path_v = list(reversed(left_v)) + right_v[1:]
    path_e = list(reversed(left_e)) + right_e
    if path_v[0] > path_v[-1] or (
        path_v[0] == path_v[-1] and len(path_v) > 2 and path_v[1] > path_v[-2]
    ):
        path_v.reverse()
        path_e.reverse()
    return path_v, path_e


def reduce_graph(G: LabeledGraph) -> ReductionResult:
    """Contract pendant trees, bridge components, and degree-two paths until
    the graph is reduced (or a single vertex); genus is preserved throughout."""
    if not is_connected(G):
        raise Disconnected("reduction requires a connected graph")
    from .graphs import contract_edges

    current = G
    steps: list[ReductionStep] = []
    g0 = genus(G)
    for _ in range(G.vertex_count + 1):
        if current.vertex_count == 1 or is_reduced(current):
            break
        pendant = _first_pendant_tree(current)
        if pendant is not None:
            verts, edges, root = pendant
            codomain, contraction = contract_edges(current, edges)
            steps.append(
                TreeStep(
                    domain=current,
                    codomain=codomain,
                    vertex_map=contraction.vertex_map,
                    tree_vertices=verts,
                    tree_edges=edges,
                    root=root,
                )
            )
            current = codomain
            continue
        bridge = _first_bridge_component(current)
        if bridge is not None:
            verts, edges = bridge
            codomain, contraction = contract_edges(current, edges)
            side_of = []
            comps = _components_without(current, removed_edges=edges)
            anchor = {}
            for comp in comps:
                inside = sorted(set(verts) & comp)
                if len(inside) != 1:
                    raise ConsistencyError("bridge side holds several anchors")
                for w in comp:
                    anchor[w] = inside[0]
            side_of = tuple(anchor[w] for w in range(current.vertex_count))
            steps.append(
                BridgeStep(
                    domain=current,
                    codomain=codomain,
                    vertex_map=contraction.vertex_map,
                    component_vertices=verts,
                    component_edges=edges,
                    basepoint=min(verts),
                    side_of=side_of,
                )
            )
            current = codomain
            continue
        chain = _first_degree2_chain(current)
        if chain is None:
            break
        path_v, path_e = chain
        contraction = contract_degree2_path(current, path_v, path_e)
        steps.append(
            PathStep(
                domain=current,
                codomain=contraction.codomain,
                vertex_map=contraction.vertex_map,
                contraction=contraction,
            )
        )
        current = contraction.codomain
    else:
        raise ConsistencyError("reduction failed to stabilize")
    if genus(current) != g0:
        raise ConsistencyError("reduction changed the genus")
    if current.vertex_count > 1 and not is_reduced(current):
        raise ConsistencyError("reduction stopped before reaching a reduced graph")
    vmap = list(range(G.vertex_count))
    for step in steps:
        vmap = [step.vertex_map[x] for x in vmap]
    extended = any(
        isinstance(s, PathStep) and s.contraction.label_outside_original
        for s in steps
    )
    return ReductionResult(
        original=G,
        reduced=current,
        steps=tuple(steps),
        vertex_map=tuple(vmap),
        label_set_extended=extended,
    )


# ---------------------------------------------------------------------------
# spline decomposition along the reduction
# ---------------------------------------------------------------------------


def step_forward(step: ReductionStep, values) -> tuple:
    """Push spline values through one reduction step (the surjection)."""
    dom, cod = step.domain, step.codomain
    if isinstance(step, TreeStep):
        rep = {}
        for w in range(dom.vertex_count):
            img = step.vertex_map[w]
            if img not in rep or w == step.root:
                rep[img] = w
        rep[step.vertex_map[step.root]] = step.root
        return tuple(values[rep[x]] for x in range(cod.vertex_count))
    if isinstance(step, BridgeStep):
        base = step.basepoint
        merged = step.vertex_map[base]
        out = []
        for x in range(cod.vertex_count):
            if x == merged:
                out.append(values[base])
            else:
                w = next(
                    w
                    for w in range(dom.vertex_count)
                    if step.vertex_map[w] == x
                )
                out.append(values[w] - values[step.side_of[w]] + values[base])
        return tuple(out)
    if isinstance(step, PathStep):
        path = step.contraction.path_vertices
        interior = set(path[1:-1])
        rep = {}
        for w in range(dom.vertex_count):
            if w in interior:
                continue
            rep[step.vertex_map[w]] = w
        return tuple(values[rep[x]] for x in range(cod.vertex_count))
    raise TypeError(f"unknown step {step!r}")


def step_section(step: ReductionStep, values) -> tuple:
    """Pull spline values back through one reduction step (the section)."""
    if isinstance(step, (TreeStep, BridgeStep)):
        return tuple(values[step.vertex_map[w]] for w in range(step.domain.vertex_count))
    if isinstance(step, PathStep):
        return step.contraction.lift_values(values)
    raise TypeError(f"unknown step {step!r}")


@dataclass(frozen=True)
class KernelPart:
    kind: str
    step_index: int
    piece: LabeledGraph  # the contracted tree / bridge tree / cycle
    basepoint: int  # local id inside the piece
    module: SplineModule  # based module of the piece
    generators: tuple[Spline, ...]  # emitted generators on the piece
    lifted_generators: tuple[Spline, ...]  # splines on the original graph
    flow_up: bool | None  # None when no claim is made (cycles)


@dataclass(frozen=True)
class SplineDecomposition:
    graph: LabeledGraph
    reduction: ReductionResult
    reduced_module: SplineModule
    lifted_reduced_generators: tuple[Spline, ...]
    kernel_parts: tuple[KernelPart, ...]
    total_size: int


def _lift_through(steps, index, values):
    """Lift values on steps[index].domain back to the original graph."""
    for step in reversed(steps[:index]):
        values = step_section(step, values)
    return values


def _forward_all(steps, values):
    for step in steps:
        values = step_forward(step, values)
    return values


def _tree_part(step, index, steps, G):
    dom = step.domain
    if isinstance(step, TreeStep):
        verts, edges, root = step.tree_vertices, step.tree_edges, step.root
    else:
        verts, edges, root = (
            step.component_vertices,
            step.component_edges,
            step.basepoint,
        )
    piece, local = _induced(dom, verts, edges)
    structure = plane_structure(piece, local[root])
    flow = tree_flow_up_generators(piece, structure)[1:]  # drop the constant
    based = based_spline_module(piece, {local[root]})
    order = depth_first_order(piece, structure)
    for q in flow:
        lead = leading_vertex(q, order)
        if lead is None or not is_flow_up(q, order, lead):
            raise ConsistencyError("tree part generator is not flow-up")
    span = SplineModule(piece, tuple(flow), based.structure, based.z_rank)
    for gen in based.generators:
        if module_membership(span, gen) is None:
            raise ConsistencyError("flow-up set fails to span the based module")
    zero = dom.ring.zero
    lifted = []
    for q in flow:
        if isinstance(step, TreeStep):
            values = tuple(
                q.values[local[w]] if w in local else zero
                for w in range(dom.vertex_count)
            )
        else:
            values = tuple(
                q.values[local[step.side_of[w]]] for w in range(dom.vertex_count)
            )
        lifted.append(Spline(G, _lift_through(steps, index, values)))
    return KernelPart(
        kind=step.kind,
        step_index=index,
        piece=piece,
        basepoint=local[root],
        module=based,
        generators=tuple(flow),
        lifted_generators=tuple(lifted),
        flow_up=True,
    )


def _cycle_part(step: PathStep, index, steps, G):
    con = step.contraction
    cycle = con.cycle_graph
    kernel = con.kernel_module
    dom = step.domain
    path = con.path_vertices
    zero = dom.ring.zero
    lifted = []
    for q in kernel.generators:
        values = []
        for w in range(dom.vertex_count):
            if w in path[1:-1]:
                values.append(q.values[path.index(w)])
            else:
                values.append(zero)
        lifted.append(Spline(G, _lift_through(steps, index, tuple(values))))
    # no flow-up claim is made for cycle parts; record whether the emitted
    # generators happen to be flow-up for the base-first order
    order = tuple(range(cycle.vertex_count))
    flow = all(
        leading_vertex(q, order) is None
        or is_flow_up(q, order, leading_vertex(q, order))
        for q in kernel.generators
    )
    return KernelPart(
        kind=step.kind,
        step_index=index,
        piece=cycle,
        basepoint=0,
        module=kernel,
        generators=kernel.generators,
        lifted_generators=tuple(lifted),
        flow_up=flow,
    )


def spline_decomposition(G: LabeledGraph) -> SplineDecomposition:
    """Decompose the spline module along the reduction of the graph.

    Produces the module of the reduced graph together with one based
    module per contracted piece, all realized by explicit splines on G;
    verifies that each lifted kernel generator maps to zero under the
    reduction surjection and that the sizes add up exactly.
    """
    reduction = reduce_graph(G)
    steps = reduction.steps
    reduced_module = compute_spline_module(reduction.reduced)
    lifted_reduced = []
    for gen in reduced_module.generators:
        values = _lift_through(steps, len(steps), gen.values)
        if not is_spline(G, values):
            raise ConsistencyError("lifted reduced generator is not a spline")
        if _forward_all(steps, values) != gen.values:
            raise ConsistencyError("surjection does not undo the section")
        lifted_reduced.append(Spline(G, values))
    parts = []
    for index, step in enumerate(steps):
        if isinstance(step, (TreeStep, BridgeStep)):
            part = _tree_part(step, index, steps, G)
        else:
            part = _cycle_part(step, index, steps, G)
        zero_values = tuple(
            reduction.reduced.ring.zero
            for _ in range(reduction.reduced.vertex_count)
        )
        for lift in part.lifted_generators:
            if not is_spline(G, lift.values):
                raise ConsistencyError("lifted kernel generator is not a spline")
            if _forward_all(steps, lift.values) != zero_values:
                raise ConsistencyError("kernel generator survives the surjection")
        parts.append(part)
    total = compute_spline_module(G).z_rank
    pieces = reduced_module.z_rank + sum(p.module.z_rank for p in parts)
    if total != pieces:
        raise ConsistencyError(
            f"size additivity fails: {total} != {pieces}"
        )
    return SplineDecomposition(
        graph=G,
        reduction=reduction,
        reduced_module=reduced_module,
        lifted_reduced_generators=tuple(lifted_reduced),
        kernel_parts=tuple(parts),
        total_size=total,
    )
