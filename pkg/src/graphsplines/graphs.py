"""Edge-labeled multigraphs, their contractions, and rooted plane structure.

Graphs are finite multigraphs with loops.  Vertices are the integers
0..vertex_count-1; each edge is a triple (end_a, end_b, label_index) with
the label index pointing into a shared list of ideals over one coefficient
ring.  Graphs are immutable once constructed; connectivity is checked by
the operations that require it rather than at construction time.

A contraction collapses an acyclic set of edges while preserving the
remaining edges and their labels.  Contractions carry explicit edge maps
because parallel edges make the edge correspondence non-inferable from
the vertex map alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadStructure,
    CycleContraction,
    Disconnected,
    NotComposable,
)
from .rings import Ideal, RingSpec, ideals_equal


@dataclass(frozen=True)
class LabeledGraph:
    """A multigraph with loops whose edges carry ideals as labels."""

    ring: RingSpec
    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    label_set: tuple[Ideal, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple((int(a), int(b), int(l)) for a, b, l in self.edges)
        )
        object.__setattr__(self, "label_set", tuple(self.label_set))
        if self.vertex_count < 1:
            raise ValueError("a graph needs at least one vertex")
        for ideal in self.label_set:
            if ideal.ring != self.ring:
                raise ValueError("label ideal over the wrong ring")
        for idx, (a, b, l) in enumerate(self.edges):
            if not (0 <= a < self.vertex_count and 0 <= b < self.vertex_count):
                raise ValueError(f"edge {idx} has an endpoint out of range")
            if not 0 <= l < len(self.label_set):
                raise ValueError(f"edge {idx} has label index {l} out of range")

    def label(self, edge_index: int) -> Ideal:
        return self.label_set[self.edges[edge_index][2]]

    def degree(self, v: int) -> int:
        """Degree with loops counting twice."""
        d = 0
        for a, b, _ in self.edges:
            if a == v:
                d += 1
            if b == v:
                d += 1
        return d

    def incident_edges(self, v: int) -> list[int]:
        return [i for i, (a, b, _) in enumerate(self.edges) if v in (a, b)]


def is_connected(G: LabeledGraph) -> bool:
    seen = {0}
    stack = [0]
    adj: dict[int, list[int]] = {}
    for a, b, _ in G.edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == G.vertex_count


def genus(G: LabeledGraph) -> int:
    """Combinatorial genus |E| - |V| + 1 of a connected graph."""
    if not is_connected(G):
        raise Disconnected("genus is only defined for connected graphs")
    return len(G.edges) - G.vertex_count + 1


def find_bridges(G: LabeledGraph) -> set[int]:
    """Edge indices whose removal disconnects the graph.

    Depth-first lowlink computation adapted to multigraphs: the tree edge
    is excluded by its index, so parallel edges correctly cancel each
    other and loops are never bridges.
    """
    if not is_connected(G):
        raise Disconnected("bridge finding requires a connected graph")
    incidence: list[list[tuple[int, int]]] = [[] for _ in range(G.vertex_count)]
    for idx, (a, b, _) in enumerate(G.edges):
        if a == b:
            continue
        incidence[a].append((idx, b))
        incidence[b].append((idx, a))
    disc = [-1] * G.vertex_count
    low = [0] * G.vertex_count
    bridges: set[int] = set()
    counter = 0
    # Iterative DFS; each stack frame tracks the edge used to enter.
    stack: list[tuple[int, int, int]] = [(0, -1, 0)]
    disc[0] = low[0] = counter
    counter += 1
    while stack:
        v, via, ptr = stack.pop()
        if ptr < len(incidence[v]):
            stack.append((v, via, ptr + 1))
            edge_idx, w = incidence[v][ptr]
            if edge_idx == via:
                continue
            if disc[w] == -1:
                disc[w] = low[w] = counter
                counter += 1
                stack.append((w, edge_idx, 0))
            else:
                low[v] = min(low[v], disc[w])
        else:
            if via != -1:
                a, b, _ = G.edges[via]
                parent = a if disc[a] < disc[b] else b
                child = b if parent == a else a
                low[parent] = min(low[parent], low[child])
                if low[child] > disc[parent]:
                    bridges.add(via)
    return bridges


def is_reduced(G: LabeledGraph) -> bool:
    """No degree-2 vertex and no bridge; single-vertex graphs count as reduced."""
    if G.vertex_count == 1:
        return True
    if any(G.degree(v) == 2 for v in range(G.vertex_count)):
        return False
    return not find_bridges(G)


@dataclass(frozen=True)
class Contraction:
    """A validated-on-demand morphism collapsing edges to vertices.

    edge_map entries are ("edge", j) for edges preserved as codomain edge
    j, or ("vertex", v) for contracted edges collapsing onto codomain
    vertex v.
    """

    domain: LabeledGraph
    codomain: LabeledGraph
    vertex_map: tuple[int, ...]
    edge_map: tuple[tuple[str, int], ...]


def validate_contraction(c: Contraction) -> str | None:
    """Return None when the map is a contraction, else the first violation."""
    G, H = c.domain, c.codomain
    if len(c.vertex_map) != G.vertex_count or len(c.edge_map) != len(G.edges):
        return "malformed: map lengths do not match the domain"
    if any(not 0 <= v < H.vertex_count for v in c.vertex_map):
        return "malformed: vertex image out of range"
    if set(c.vertex_map) != set(range(H.vertex_count)):
        return "condition 1: vertex map is not surjective"
    for idx, (a, b, _) in enumerate(G.edges):
        kind, target = c.edge_map[idx]
        if kind == "vertex":
            if not 0 <= target < H.vertex_count:
                return "malformed: edge image vertex out of range"
            if c.vertex_map[a] != target or c.vertex_map[b] != target:
                return f"condition 2: contracted edge {idx} does not collapse onto its image"
        elif kind == "edge":
            if not 0 <= target < len(H.edges):
                return "malformed: edge image out of range"
            a2, b2, _ = H.edges[target]
            if {c.vertex_map[a], c.vertex_map[b]} != {a2, b2}:
                return f"condition 2: edge {idx} does not preserve adjacency"
        else:
            return f"malformed: unknown edge image tag {kind!r}"
    kept = [(i, t) for i, (k, t) in enumerate(c.edge_map) if k == "edge"]
    images = [t for _, t in kept]
    if sorted(images) != list(range(len(H.edges))):
        return "condition 3: preserved edges are not in bijection with codomain edges"
    for i, t in kept:
        if not ideals_equal(G.label_set[G.edges[i][2]], H.label_set[H.edges[t][2]]):
            return f"condition 3: edge {i} changes its label"
    for v in range(H.vertex_count):
        pre_vertices = [w for w in range(G.vertex_count) if c.vertex_map[w] == v]
        pre_edges = [
            i for i, (k, t) in enumerate(c.edge_map) if k == "vertex" and t == v
        ]
        if len(pre_edges) != len(pre_vertices) - 1:
            return f"condition 4: preimage of vertex {v} is not a tree"
        # connectivity of the preimage under its contracted edges
        parent = {w: w for w in pre_vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in pre_edges:
            a, b, _ = G.edges[i]
            ra, rb = find(a), find(b)
            if ra == rb:
                return f"condition 4: preimage of vertex {v} contains a cycle"
            parent[ra] = rb
        roots = {find(w) for w in pre_vertices}
        if len(roots) != 1:
            return f"condition 4: preimage of vertex {v} is not connected"
    return None


def contract_edges(
    G: LabeledGraph, edge_idxs
) -> tuple[LabeledGraph, Contraction]:
    """Contract an acyclic, loop-free set of edges.

    Each connected component of the chosen subgraph collapses to one
    codomain vertex; codomain vertices are renumbered 0..|V'|-1 in order
    of their smallest original vertex.  Surviving edges keep their labels
    and their relative order.
    """
    chosen = sorted(set(edge_idxs))
    for i in chosen:
        if not 0 <= i < len(G.edges):
            raise CycleContraction(f"edge index {i} out of range")
        a, b, _ = G.edges[i]
        if a == b:
            raise CycleContraction(f"edge {i} is a loop")
    parent = list(range(G.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in chosen:
        a, b, _ = G.edges[i]
        ra, rb = find(a), find(b)
        if ra == rb:
            raise CycleContraction(f"chosen edges contain a cycle through edge {i}")
        parent[ra] = rb
    comp_min: dict[int, int] = {}
    for v in range(G.vertex_count):
        r = find(v)
        comp_min[r] = min(comp_min.get(r, v), v)
    reps = sorted(comp_min.values())
    new_id = {rep: i for i, rep in enumerate(reps)}
    vertex_map = tuple(new_id[comp_min[find(v)]] for v in range(G.vertex_count))
    chosen_set = set(chosen)
    new_edges = []
    edge_map: list[tuple[str, int]] = []
    for i, (a, b, l) in enumerate(G.edges):
        if i in chosen_set:
            edge_map.append(("vertex", vertex_map[a]))
        else:
            edge_map.append(("edge", len(new_edges)))
            new_edges.append((vertex_map[a], vertex_map[b], l))
    codomain = LabeledGraph(G.ring, len(reps), tuple(new_edges), G.label_set)
    return codomain, Contraction(G, codomain, vertex_map, tuple(edge_map))


def identity_contraction(G: LabeledGraph) -> Contraction:
    return Contraction(
        G,
        G,
        tuple(range(G.vertex_count)),
        tuple(("edge", i) for i in range(len(G.edges))),
    )


def compose_contractions(c2: Contraction, c1: Contraction) -> Contraction:
    """The composite contraction applying c1 first, then c2."""
    if c1.codomain != c2.domain:
        raise NotComposable("codomain of the first map must be the second's domain")
    vertex_map = tuple(c2.vertex_map[v] for v in c1.vertex_map)
    edge_map: list[tuple[str, int]] = []
    for kind, target in c1.edge_map:
        if kind == "vertex":
            edge_map.append(("vertex", c2.vertex_map[target]))
        else:
            edge_map.append(c2.edge_map[target])
    return Contraction(c1.domain, c2.codomain, vertex_map, tuple(edge_map))


@dataclass(frozen=True)
class PlaneRootedStructure:
    """Root, spanning tree, per-vertex child order, and extra-edge order."""

    root: int
    spanning_tree_edges: tuple[int, ...]
    child_order: tuple[tuple[int, ...], ...]
    extra_edge_order: tuple[int, ...]


def _rooted_tree_children(
    G: LabeledGraph, tree_edges: set[int], root: int
) -> tuple[list[list[int]], list[int | None]]:
    """Out-edges per vertex and the entering edge per vertex, or raise."""
    incidence: list[list[tuple[int, int]]] = [[] for _ in range(G.vertex_count)]
    for i in sorted(tree_edges):
        a, b, _ = G.edges[i]
        if a == b:
            raise BadStructure("spanning tree contains a loop")
        incidence[a].append((i, b))
        incidence[b].append((i, a))
    children: list[list[int]] = [[] for _ in range(G.vertex_count)]
    entering: list[int | None] = [None] * G.vertex_count
    seen = {root}
    queue = [root]
    while queue:
        v = queue.pop(0)
        for edge_idx, w in incidence[v]:
            if edge_idx == entering[v]:
                continue
            if w in seen:
                raise BadStructure("spanning tree edges contain a cycle")
            seen.add(w)
            entering[w] = edge_idx
            children[v].append(edge_idx)
            queue.append(w)
    if len(seen) != G.vertex_count:
        raise BadStructure("spanning tree does not reach every vertex")
    return children, entering


def depth_first_order(G: LabeledGraph, s: PlaneRootedStructure) -> tuple[int, ...]:
    """Vertices in depth-first order: root first, children in child-order."""
    if not 0 <= s.root < G.vertex_count:
        raise BadStructure("root out of range")
    tree = set(s.spanning_tree_edges)
    if len(tree) != G.vertex_count - 1:
        raise BadStructure("spanning tree must have |V| - 1 edges")
    children, _ = _rooted_tree_children(G, tree, s.root)
    if len(s.child_order) != G.vertex_count:
        raise BadStructure("child order must list every vertex")
    for v in range(G.vertex_count):
        if sorted(s.child_order[v]) != sorted(children[v]):
            raise BadStructure(f"child order at vertex {v} does not match its out-edges")
    extra = [i for i in range(len(G.edges)) if i not in tree]
    if sorted(s.extra_edge_order) != extra:
        raise BadStructure("extra edge order must list exactly the non-tree edges")
    order = []
    stack = [s.root]
    while stack:
        v = stack.pop()
        order.append(v)
        for edge_idx in reversed(s.child_order[v]):
            a, b, _ = G.edges[edge_idx]
            stack.append(b if a == v else a)
    return tuple(order)


def plane_structure(G: LabeledGraph, root: int = 0) -> PlaneRootedStructure:
    """Default rooted plane structure: depth-first spanning tree from the
    root taking edges in index order, extra edges ordered by index."""
    if not 0 <= root < G.vertex_count:
        raise BadStructure("root out of range")
    if not is_connected(G):
        raise Disconnected("plane structure requires a connected graph")
    incidence: list[list[tuple[int, int]]] = [[] for _ in range(G.vertex_count)]
    for i, (a, b, _) in enumerate(G.edges):
        if a == b:
            continue
        incidence[a].append((i, b))
        incidence[b].append((i, a))
    tree: list[int] = []
    children: list[list[int]] = [[] for _ in range(G.vertex_count)]
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for edge_idx, w in incidence[v]:
            if w not in seen:
                seen.add(w)
                tree.append(edge_idx)
                children[v].append(edge_idx)
                stack.append(w)
    extra = tuple(i for i in range(len(G.edges)) if i not in set(tree))
    return PlaneRootedStructure(
        root=root,
        spanning_tree_edges=tuple(sorted(tree)),
        child_order=tuple(tuple(c) for c in children),
        extra_edge_order=extra,
    )


def subtree_blocks(
    G: LabeledGraph, s: PlaneRootedStructure
) -> tuple[tuple[int, ...], dict[int, int], list[int | None]]:
    """Depth-first order, subtree sizes, and entering tree edge per vertex."""
    order = depth_first_order(G, s)
    children, entering = _rooted_tree_children(
        G, set(s.spanning_tree_edges), s.root
    )
    sizes = {v: 1 for v in order}
    for v in reversed(order):
        for edge_idx in children[v]:
            a, b, _ = G.edges[edge_idx]
            child = b if a == v else a
            sizes[v] += sizes[child]
    return order, sizes, entering
