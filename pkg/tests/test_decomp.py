"""Decomposition theory: unions, bridges, path contraction, reduction."""

import itertools
import random

import pytest

from graphsplines.corpus import connected_multigraphs, labelings_up_to_aut
from graphsplines.errors import (
    BadOrder,
    Disconnected,
    NotABridgePath,
    NotCutVertex,
    NotDegreeTwoPath,
)
from graphsplines.decomp import (
    BridgeStep,
    PathStep,
    TreeStep,
    bridge_path_decompose,
    contract_degree2_path,
    one_point_union_decompose,
    reduce_graph,
    spline_decomposition,
    step_forward,
    step_section,
    wedge_flow_up_basis,
)
from graphsplines.graphs import (
    LabeledGraph,
    depth_first_order,
    genus,
    is_reduced,
    plane_structure,
)
from graphsplines.rings import Ideal, IntegerRing, ModularRing, PrimeField
from graphsplines.splinecore import (
    compute_spline_module,
    is_spline,
    make_spline,
    spline_span_basis,
    tree_flow_up_generators,
)

Z = IntegerRing()
Z4 = ModularRing(4)
F2 = PrimeField(2)
F5 = PrimeField(5)


def payloads(spline):
    return tuple(v.payload for v in spline.values)


def zgraph(vertices, edges, gens=((2,), (3,))):
    return LabeledGraph(Z, vertices, tuple(edges), tuple(Ideal(Z, g) for g in gens))


# ---------------------------------------------------------------------------
# one-point unions
# ---------------------------------------------------------------------------


def test_union_two_edges():
    # edges (2) and (3) joined at the middle vertex of a path
    G = zgraph(3, [(0, 1, 0), (1, 2, 1)])
    d = one_point_union_decompose(G, 1)
    assert d.full_part.module.z_rank + d.based_part.module.z_rank == 3
    lifted = list(d.full_part.lifted_generators) + list(d.based_part.lifted_generators)
    assert spline_span_basis(lifted) == spline_span_basis(
        list(compute_spline_module(G).generators)
    )


def test_union_single_vertex_side():
    G = zgraph(3, [(0, 1, 0), (1, 2, 1)])
    # explicitly put everything on the first side: the based part is zero
    d = one_point_union_decompose(G, 1, side={0, 2})
    assert d.based_part.module.z_rank == 0
    assert d.based_part.subgraph.vertex_count == 1
    assert d.full_part.module.z_rank == compute_spline_module(G).z_rank


def test_union_dimension_additivity_over_field():
    S = (Ideal(F5, (1,)), Ideal(F5, ()))
    rng = random.Random(23)
    for _ in range(10):
        n1, n2 = rng.randrange(2, 4), rng.randrange(2, 4)
        edges1 = [(i, rng.randrange(i), rng.randrange(2)) for i in range(1, n1)]
        edges2 = [(i, rng.randrange(i), rng.randrange(2)) for i in range(1, n2)]
        # glue vertex 0 of both sides; second side vertices shift by n1 - 1
        edges = [(a, b, l) for a, b, l in edges1]
        for a, b, l in edges2:
            sa = 0 if a == 0 else a + n1 - 1
            sb = 0 if b == 0 else b + n1 - 1
            edges.append((sa, sb, l))
        G = LabeledGraph(F5, n1 + n2 - 1, tuple(edges), S)
        d = one_point_union_decompose(G, 0)
        total = compute_spline_module(G).z_rank
        side1 = compute_spline_module(d.full_part.subgraph).z_rank
        side2 = compute_spline_module(d.based_part.subgraph).z_rank
        assert total == side1 + side2 - 1
        assert d.full_part.module.z_rank + d.based_part.module.z_rank == total


def test_union_not_cut_vertex():
    tri = zgraph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)])
    with pytest.raises(NotCutVertex):
        one_point_union_decompose(tri, 0)


# ---------------------------------------------------------------------------
# wedges of flow-up bases
# ---------------------------------------------------------------------------


def test_wedge_two_single_edges():
    G = zgraph(3, [(0, 1, 0), (1, 2, 0)], gens=((4,),))
    d = one_point_union_decompose(G, 1)
    b1 = tree_flow_up_generators(
        d.full_part.subgraph,
        plane_structure(d.full_part.subgraph, d.full_part.vertices.index(1)),
    )
    b2 = tree_flow_up_generators(
        d.based_part.subgraph,
        plane_structure(d.based_part.subgraph, d.based_part.vertices.index(1)),
    )
    out, order = wedge_flow_up_basis(G, 1, b1, b2)
    assert len(out) == len(b1) + len(b2) - 1 == 3


def test_wedge_matches_tree_generators():
    # a path wedged with a path is a longer path
    G = zgraph(4, [(0, 1, 0), (1, 2, 1), (2, 3, 0)])
    d = one_point_union_decompose(G, 2)
    b1 = tree_flow_up_generators(
        d.full_part.subgraph,
        plane_structure(d.full_part.subgraph, d.full_part.vertices.index(2)),
    )
    b2 = tree_flow_up_generators(
        d.based_part.subgraph,
        plane_structure(d.based_part.subgraph, d.based_part.vertices.index(2)),
    )
    out, order = wedge_flow_up_basis(G, 2, b1, b2)
    direct = tree_flow_up_generators(G, plane_structure(G, 2))
    assert spline_span_basis(out) == spline_span_basis(direct)


def test_wedge_bad_order():
    G = zgraph(3, [(0, 1, 0), (1, 2, 0)])
    d = one_point_union_decompose(G, 1)
    sub2 = d.based_part.subgraph
    v_local = d.based_part.vertices.index(1)
    other = next(w for w in range(sub2.vertex_count) if w != v_local)
    b1 = tree_flow_up_generators(
        d.full_part.subgraph,
        plane_structure(d.full_part.subgraph, d.full_part.vertices.index(1)),
    )
    b2 = tree_flow_up_generators(sub2, plane_structure(sub2, v_local))
    with pytest.raises(BadOrder):
        wedge_flow_up_basis(G, 1, b1, b2, order2=(other, v_local))


# ---------------------------------------------------------------------------
# bridge paths
# ---------------------------------------------------------------------------


def test_bridge_dumbbell():
    dumb = zgraph(2, [(0, 0, 0), (0, 1, 0), (1, 1, 1)])
    d = bridge_path_decompose(dumb, (0, 1))
    assert d.side_a.module.z_rank == 1
    assert d.path_part.module.z_rank == 1
    assert d.side_b.module.z_rank == 0
    assert compute_spline_module(dumb).z_rank == 2


def test_bridge_single_edge_between_points():
    edge = zgraph(2, [(0, 1, 0)])
    d = bridge_path_decompose(edge, (0, 1))
    ranks = (
        d.side_a.module.z_rank,
        d.path_part.module.z_rank,
        d.side_b.module.z_rank,
    )
    assert ranks == (1, 1, 0)


def test_bridge_path_field_contribution():
    # loops on both ends, a path of k unit-labeled bridges in between:
    # the path contributes k dimensions
    S = (Ideal(F5, (1,)),)
    k = 3
    edges = [(0, 0, 0)] + [(i, i + 1, 0) for i in range(k)] + [(k, k, 0)]
    G = LabeledGraph(F5, k + 1, tuple(edges), S)
    d = bridge_path_decompose(G, tuple(range(k + 1)))
    assert d.path_part.module.z_rank == k
    assert compute_spline_module(G).z_rank == 1 + k


def test_bridge_rejects_cycle_edge():
    tri = zgraph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)])
    with pytest.raises(NotABridgePath):
        bridge_path_decompose(tri, (0, 1))


# ---------------------------------------------------------------------------
# degree-two path contraction
# ---------------------------------------------------------------------------


def test_contract_path_in_triangle():
    G = zgraph(
        3,
        [(0, 1, 0), (1, 2, 1), (0, 2, 2)],
        gens=((4,), (6,), (5,)),
    )
    con = contract_degree2_path(G, (0, 1, 2))
    assert con.codomain.vertex_count == 2
    assert [g.payload for g in con.summed_label.generators] == [4, 6]
    assert con.kernel_module.z_rank == 1
    assert payloads(con.kernel_module.generators[0]) == (0, 12)
    assert con.label_outside_original


def test_contract_path_lift_surjectivity():
    G = zgraph(
        3,
        [(0, 1, 0), (1, 2, 1), (0, 2, 2)],
        gens=((4,), (6,), (10,)),
    )
    con = contract_degree2_path(G, (0, 1, 2))
    module = compute_spline_module(con.codomain)
    rng = random.Random(9)
    for _ in range(8):
        coeffs = [rng.randrange(-3, 4) for _ in module.generators]
        acc = [Z.zero] * con.codomain.vertex_count
        for c, gen in zip(coeffs, module.generators):
            acc = [x + Z.element(c) * v for x, v in zip(acc, gen.values)]
        q = make_spline(con.codomain, [v.payload for v in acc])
        lifted = con.lift_spline(q)
        assert is_spline(G, lifted.values)
        survivors = [w for w in range(3) if w != 1]
        restricted = tuple(lifted.values[w] for w in survivors)
        assert restricted == q.values


def test_contract_path_trivial_and_zero_labels():
    edge = zgraph(2, [(0, 1, 0)])
    con = contract_degree2_path(edge, (0, 1))
    assert con.codomain == edge
    assert con.kernel_module is None

    zeros = LabeledGraph(Z, 3, ((0, 1, 0), (1, 2, 0)), (Ideal(Z, ()),))
    con2 = contract_degree2_path(zeros, (0, 1, 2))
    assert con2.summed_label.is_zero()
    assert con2.kernel_module.z_rank == 0


def test_contract_path_rejects_high_degree_interior():
    star_tri = zgraph(4, [(0, 1, 0), (1, 2, 0), (0, 2, 0), (1, 3, 0)])
    with pytest.raises(NotDegreeTwoPath):
        contract_degree2_path(star_tri, (0, 1, 2))


# ---------------------------------------------------------------------------
# reduction pipeline
# ---------------------------------------------------------------------------


def test_reduce_tree_to_point():
    tree = zgraph(4, [(0, 1, 0), (1, 2, 1), (1, 3, 0)])
    r = reduce_graph(tree)
    assert r.reduced.vertex_count == 1 and not r.reduced.edges
    assert len(r.steps) == 1 and isinstance(r.steps[0], TreeStep)


def test_reduce_cycle_to_loop():
    for n in (2, 3, 5):
        cyc = zgraph(n, [(i, (i + 1) % n, i % 2) for i in range(n)])
        r = reduce_graph(cyc)
        assert r.reduced.vertex_count == 1
        assert len(r.reduced.edges) == 1
        a, b, _ = r.reduced.edges[0]
        assert a == b
        assert len(r.steps) == 1 and isinstance(r.steps[0], PathStep)


def test_reduce_two_triangles_to_figure_eight():
    G = zgraph(
        5, [(0, 1, 0), (1, 2, 0), (0, 2, 0), (0, 3, 1), (3, 4, 1), (0, 4, 1)]
    )
    r = reduce_graph(G)
    assert r.reduced.vertex_count == 1
    assert len(r.reduced.edges) == 2
    assert all(a == b for a, b, _ in r.reduced.edges)


def test_reduce_preserves_genus_stepwise():
    G = zgraph(
        6,
        [
            (0, 1, 0),
            (1, 2, 0),
            (0, 2, 0),
            (2, 3, 1),
            (3, 4, 0),
            (4, 5, 1),
            (3, 5, 0),
        ],
    )
    r = reduce_graph(G)
    for step in r.steps:
        assert genus(step.domain) == genus(step.codomain)
    assert is_reduced(r.reduced) or r.reduced.vertex_count == 1


def test_reduce_replay_vertex_maps():
    G = zgraph(5, [(0, 1, 0), (1, 2, 0), (2, 3, 0), (3, 1, 0), (0, 4, 1)])
    r = reduce_graph(G)
    vmap = list(range(G.vertex_count))
    for step in r.steps:
        vmap = [step.vertex_map[x] for x in vmap]
    assert tuple(vmap) == r.vertex_map
    assert set(vmap) == set(range(r.reduced.vertex_count))


def test_reduce_disconnected():
    with pytest.raises(Disconnected):
        reduce_graph(zgraph(2, []))


def test_step_maps_are_sections():
    G = zgraph(
        6,
        [
            (0, 1, 0),
            (1, 2, 0),
            (0, 2, 0),
            (2, 3, 1),
            (3, 4, 0),
            (4, 5, 1),
            (3, 5, 0),
        ],
    )
    r = reduce_graph(G)
    for step in r.steps:
        module = compute_spline_module(step.codomain)
        for gen in module.generators:
            lifted = step_section(step, gen.values)
            assert is_spline(step.domain, lifted)
            assert step_forward(step, lifted) == gen.values


# ---------------------------------------------------------------------------
# full decomposition
# ---------------------------------------------------------------------------


def test_decompose_theta_trivial():
    theta = zgraph(2, [(0, 1, 0), (0, 1, 1), (0, 1, 0)])
    d = spline_decomposition(theta)
    assert not d.reduction.steps
    assert not d.kernel_parts
    assert d.total_size == d.reduced_module.z_rank


def test_decompose_tadpole():
    tad = LabeledGraph(
        Z,
        4,
        ((0, 1, 0), (1, 2, 0), (0, 2, 0), (0, 3, 0)),
        (Ideal(Z, (2,)),),
    )
    d = spline_decomposition(tad)
    assert d.total_size == 4
    assert d.reduced_module.z_rank == 1
    kinds = sorted((p.kind, p.module.z_rank) for p in d.kernel_parts)
    assert kinds == [("path", 2), ("tree", 1)]
    for part in d.kernel_parts:
        for lift in part.lifted_generators:
            assert is_spline(tad, lift.values)


def test_decompose_two_triangles_over_field():
    G = LabeledGraph(
        F5,
        5,
        ((0, 1, 0), (1, 2, 0), (0, 2, 0), (0, 3, 0), (3, 4, 0), (0, 4, 0)),
        (Ideal(F5, (1,)),),
    )
    d = spline_decomposition(G)
    assert d.total_size == 5
    assert d.reduced_module.z_rank == 1
    assert sorted(p.module.z_rank for p in d.kernel_parts) == [2, 2]


def test_decompose_additivity_sweep_small():
    rings = [
        (F2, (Ideal(F2, ()), Ideal(F2, (1,)))),
        (Z4, (Ideal(Z4, (2,)), Ideal(Z4, ()))),
        (Z, (Ideal(Z, (2,)), Ideal(Z, (3,)))),
    ]
    shapes = connected_multigraphs(5, 4, max_genus=2)
    for ring, S in rings:
        for n, edges in shapes:
            for labels in labelings_up_to_aut(n, edges, 2)[:2]:
                G = LabeledGraph(
                    ring,
                    n,
                    tuple((a, b, l) for (a, b), l in zip(edges, labels)),
                    S,
                )
                d = spline_decomposition(G)  # raises on any failed check
                g = genus(G)
                if g == 1:
                    assert d.reduction.reduced.vertex_count == 1
                    assert len(d.reduction.reduced.edges) == 1
                if g == 2:
                    reduced = d.reduction.reduced
                    loops = sum(1 for a, b, _ in reduced.edges if a == b)
                    assert (
                        reduced.vertex_count == 1 and len(reduced.edges) == 2
                    ) or (
                        reduced.vertex_count == 2
                        and len(reduced.edges) == 3
                        and loops == 0
                    )


def test_decompose_flow_up_flags():
    G = zgraph(
        6,
        [
            (0, 1, 0),
            (1, 2, 0),
            (0, 2, 0),
            (2, 3, 1),
            (3, 4, 0),
            (4, 5, 1),
            (3, 5, 0),
        ],
    )
    d = spline_decomposition(G)
    for part in d.kernel_parts:
        if part.kind in ("tree", "bridge"):
            assert part.flow_up is True
        else:
            assert part.flow_up in (True, False)
