"""Exhaustive enumeration of small connected multigraphs, up to isomorphism.

Graphs are represented here as (vertex_count, sorted tuple of (a, b)
endpoint pairs with a <= b); loops are pairs (a, a).  Canonical forms are
computed by brute-force search over vertex permutations, restricted to
permutations preserving the (degree, loop count) invariant, which keeps
the search tractable for the desk-scale sizes used in the test sweeps.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

Edges = tuple[tuple[int, int], ...]


def _normalize(edges) -> Edges:
    return tuple(sorted((min(a, b), max(a, b)) for a, b in edges))


def _apply_perm(edges: Edges, perm) -> Edges:
    return _normalize((perm[a], perm[b]) for a, b in edges)


def _invariant_groups(n: int, edges: Edges) -> list[list[int]]:
    stats = {v: [0, 0] for v in range(n)}
    for a, b in edges:
        if a == b:
            stats[a][0] += 2
            stats[a][1] += 1
        else:
            stats[a][0] += 1
            stats[b][0] += 1
    groups: dict[tuple[int, int], list[int]] = {}
    for v in range(n):
        groups.setdefault(tuple(stats[v]), []).append(v)
    return [groups[k] for k in sorted(groups)]


def _grouped_permutations(n: int, edges: Edges):
    """Permutations of 0..n-1 preserving the per-vertex invariant."""
    groups = _invariant_groups(n, edges)
    for parts in itertools.product(
        *(itertools.permutations(g) for g in groups)
    ):
        perm = [0] * n
        for group, part in zip(groups, parts):
            for src, dst in zip(group, part):
                perm[src] = dst
        yield tuple(perm)


def canonical_form(n: int, edges) -> tuple[int, Edges]:
    """Lexicographically least relabeling of the edge multiset.

    Vertices are first blocked by their (degree, loop count) invariant --
    an isomorphism-invariant partition -- and each ordering of the
    vertices within their blocks maps onto consecutive ids, so the
    minimum ranges over every relabeling any isomorphism could yield.
    """
    edges = _normalize(edges)
    groups = _invariant_groups(n, edges)
    best = None
    for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [0] * n
        idx = 0
        for part in parts:
            for src in part:
                perm[src] = idx
                idx += 1
        candidate = _apply_perm(edges, perm)
        if best is None or candidate < best:
            best = candidate
    return n, best


def automorphisms(n: int, edges) -> list[tuple[int, ...]]:
    """All vertex permutations preserving the edge multiset."""
    edges = _normalize(edges)
    return [
        perm
        for perm in _grouped_permutations(n, edges)
        if _apply_perm(edges, perm) == edges
    ]


def are_isomorphic(n1: int, edges1, n2: int, edges2) -> bool:
    if n1 != n2:
        return False
    return canonical_form(n1, edges1) == canonical_form(n2, edges2)


def _is_connected(n: int, edges: Edges) -> bool:
    if n == 1:
        return True
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def connected_multigraphs(
    max_vertices: int, max_edges: int, max_genus: int | None = None
) -> list[tuple[int, Edges]]:
    """All connected multigraphs within the bounds, one per isomorphism class.

    Grown by edge addition: every connected multigraph arises from a
    smaller one either by adding an edge between existing vertices (raising
    the genus) or by attaching a new vertex along a new edge.
    """
    seen: set[tuple[int, Edges]] = set()
    out: list[tuple[int, Edges]] = []
    frontier: list[tuple[int, Edges]] = [(1, ())]
    start = canonical_form(1, ())
    seen.add(start)
    out.append(start)
    while frontier:
        next_frontier = []
        for n, edges in frontier:
            if len(edges) == max_edges:
                continue
            candidates = []
            genus = len(edges) - n + 1
            if max_genus is None or genus + 1 <= max_genus:
                for a in range(n):
                    for b in range(a, n):
                        candidates.append((n, edges + ((a, b),)))
            if n < max_vertices:
                for a in range(n):
                    candidates.append((n + 1, edges + ((a, n),)))
            for n2, e2 in candidates:
                key = canonical_form(n2, e2)
                if key in seen:
                    continue
                seen.add(key)
                out.append(key)
                next_frontier.append(key)
        frontier = next_frontier
    return [g for g in out if _is_connected(*g)]


def labelings_up_to_aut(n: int, edges, label_count: int) -> list[tuple[int, ...]]:
    """Label assignments for the edges, one per automorphism orbit."""
    edges = _normalize(edges)
    auts = automorphisms(n, edges)
    index_maps = []
    for perm in auts:
        mapping = []
        permuted = [
            (min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in edges
        ]
        # match permuted edges back to positions in the sorted edge list
        pool: dict[tuple[int, int], list[int]] = {}
        for pos, e in enumerate(edges):
            pool.setdefault(e, []).append(pos)
        taken: dict[tuple[int, int], int] = {}
        for e in permuted:
            k = taken.get(e, 0)
            mapping.append(pool[e][k])
            taken[e] = k + 1
        index_maps.append(tuple(mapping))
    reps = []
    seen_canon: set[tuple] = set()
    for labels in itertools.product(range(label_count), repeat=len(edges)):
        canon = min(
            tuple(sorted(zip(edges, (labels[m] for m in mapping))))
            for mapping in index_maps
        )
        if canon not in seen_canon:
            seen_canon.add(canon)
            reps.append(labels)
    return reps
