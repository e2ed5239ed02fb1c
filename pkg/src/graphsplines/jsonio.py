"""JSON encodings for rings, graphs, splines, and computation results.

The graph document format:

    {
      "ring": {"type": "Z"} | {"type": "ZmodN", "n": 4} |
              {"type": "Fp", "p": 3} |
              {"type": "TruncPoly", "base": {"type": "Fp", "p": 2} | {"type": "Q"},
               "vars": 2, "degree": 2},
      "ideals": [[gen, ...], ...],
      "vertices": N,
      "edges": [[a, b, labelIdx], ...],
      "root": 0,                    # optional plane structure block
      "spanningTree": [0, 2],
      "childOrder": {"0": [0], "1": [2]},
      "extraOrder": [1]
    }

Element literals are integers for Z, Z/nZ, and F_p; for truncated
polynomial rings they are lists of [coefficient, [exponents...]] pairs
with rational coefficients written as "num/den" strings.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import GraphSplinesError
from .graphs import LabeledGraph, PlaneRootedStructure
from .rings import (
    Ideal,
    IntegerRing,
    ModularRing,
    PrimeField,
    RationalField,
    RingElement,
    RingSpec,
    TruncatedPolynomialRing,
)
from .splinecore import (
    FieldDim,
    FreeRank,
    InvariantFactors,
    Spline,
    SplineModule,
)


class DocumentError(GraphSplinesError):
    """A JSON document failed to parse or validate; the message names the field."""


def ring_to_json(ring: RingSpec) -> dict:
    if isinstance(ring, IntegerRing):
        return {"type": "Z"}
    if isinstance(ring, ModularRing):
        return {"type": "ZmodN", "n": ring.n}
    if isinstance(ring, PrimeField):
        return {"type": "Fp", "p": ring.p}
    if isinstance(ring, TruncatedPolynomialRing):
        base = (
            {"type": "Q"}
            if isinstance(ring.base, RationalField)
            else {"type": "Fp", "p": ring.base.p}
        )
        return {
            "type": "TruncPoly",
            "base": base,
            "vars": ring.nvars,
            "degree": ring.degree,
        }
    raise DocumentError(f"ring: cannot serialize {ring!r}")


def ring_from_json(doc) -> RingSpec:
    if not isinstance(doc, dict) or "type" not in doc:
        raise DocumentError("ring: expected an object with a 'type' field")
    kind = doc["type"]
    try:
        if kind == "Z":
            return IntegerRing()
        if kind == "ZmodN":
            return ModularRing(int(doc["n"]))
        if kind == "Fp":
            return PrimeField(int(doc["p"]))
        if kind == "TruncPoly":
            base_doc = doc["base"]
            if base_doc.get("type") == "Q":
                base = RationalField()
            else:
                base = PrimeField(int(base_doc["p"]))
            return TruncatedPolynomialRing(base, int(doc["vars"]), int(doc["degree"]))
    except KeyError as exc:
        raise DocumentError(f"ring: missing field {exc}") from exc
    except (TypeError, ValueError, GraphSplinesError) as exc:
        raise DocumentError(f"ring: {exc}") from exc
    raise DocumentError(f"ring: unknown type {kind!r}")


def _coeff_to_json(c):
    if isinstance(c, Fraction):
        return str(c) if c.denominator != 1 else int(c)
    return c


def element_to_json(e: RingElement):
    ring = e.ring
    if isinstance(ring, TruncatedPolynomialRing):
        return [[_coeff_to_json(c), list(exps)] for exps, c in e.payload]
    return e.payload


def element_from_json(ring: RingSpec, doc) -> RingElement:
    try:
        if isinstance(ring, TruncatedPolynomialRing):
            if isinstance(doc, (int, str)):
                return ring.element(
                    Fraction(doc) if isinstance(ring.base, RationalField) else int(doc)
                )
            pairs = []
            for item in doc:
                coeff, exps = item
                if isinstance(coeff, str):
                    coeff = Fraction(coeff)
                pairs.append((coeff, tuple(int(x) for x in exps)))
            return ring.element(pairs)
        return ring.element(int(doc))
    except (TypeError, ValueError, GraphSplinesError) as exc:
        raise DocumentError(f"element {doc!r}: {exc}") from exc


def ideal_to_json(i: Ideal) -> list:
    return [element_to_json(g) for g in i.generators]


def ideal_from_json(ring: RingSpec, doc) -> Ideal:
    if not isinstance(doc, list):
        raise DocumentError("ideal: expected a list of generators")
    return Ideal(ring, tuple(element_from_json(ring, g) for g in doc))


def graph_to_json(G: LabeledGraph, structure: PlaneRootedStructure | None = None) -> dict:
    doc = {
        "ring": ring_to_json(G.ring),
        "ideals": [ideal_to_json(i) for i in G.label_set],
        "vertices": G.vertex_count,
        "edges": [list(e) for e in G.edges],
    }
    if structure is not None:
        doc["root"] = structure.root
        doc["spanningTree"] = list(structure.spanning_tree_edges)
        doc["childOrder"] = {
            str(v): list(order) for v, order in enumerate(structure.child_order)
        }
        doc["extraOrder"] = list(structure.extra_edge_order)
    return doc


def graph_from_json(doc) -> tuple[LabeledGraph, PlaneRootedStructure | None]:
    if not isinstance(doc, dict):
        raise DocumentError("document: expected a JSON object")
    for field in ("ring", "ideals", "vertices", "edges"):
        if field not in doc:
            raise DocumentError(f"{field}: missing")
    ring = ring_from_json(doc["ring"])
    ideals = tuple(ideal_from_json(ring, i) for i in doc["ideals"])
    try:
        vertices = int(doc["vertices"])
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"vertices: {exc}") from exc
    edges = []
    for k, e in enumerate(doc["edges"]):
        if not isinstance(e, (list, tuple)) or len(e) != 3:
            raise DocumentError(f"edges[{k}]: expected [endA, endB, labelIdx]")
        a, b, l = (int(x) for x in e)
        if not 0 <= l < len(ideals):
            raise DocumentError(f"edges[{k}]: labelIdx {l} out of range")
        if not (0 <= a < vertices and 0 <= b < vertices):
            raise DocumentError(f"edges[{k}]: endpoint out of range")
        edges.append((a, b, l))
    try:
        graph = LabeledGraph(ring, vertices, tuple(edges), ideals)
    except (ValueError, GraphSplinesError) as exc:
        raise DocumentError(str(exc)) from exc
    structure = None
    if "root" in doc:
        try:
            child_order_doc = doc.get("childOrder", {})
            child_order = tuple(
                tuple(int(x) for x in child_order_doc.get(str(v), []))
                for v in range(vertices)
            )
            structure = PlaneRootedStructure(
                root=int(doc["root"]),
                spanning_tree_edges=tuple(
                    int(x) for x in doc.get("spanningTree", [])
                ),
                child_order=child_order,
                extra_edge_order=tuple(int(x) for x in doc.get("extraOrder", [])),
            )
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"structure block: {exc}") from exc
    return graph, structure


def spline_to_json(s: Spline) -> list:
    return [element_to_json(v) for v in s.values]


def reduction_to_json(r) -> dict:
    from .decomp import BridgeStep, PathStep, TreeStep

    steps = []
    for s in r.steps:
        if isinstance(s, TreeStep):
            steps.append(
                {
                    "type": "treeContraction",
                    "treeVertices": list(s.tree_vertices),
                    "treeEdges": list(s.tree_edges),
                    "root": s.root,
                    "vertexMap": list(s.vertex_map),
                }
            )
        elif isinstance(s, BridgeStep):
            steps.append(
                {
                    "type": "bridgePathContraction",
                    "vertices": list(s.component_vertices),
                    "edges": list(s.component_edges),
                    "survivor": s.basepoint,
                    "vertexMap": list(s.vertex_map),
                }
            )
        elif isinstance(s, PathStep):
            steps.append(
                {
                    "type": "nonBridgePathContraction",
                    "path": list(s.contraction.path_vertices),
                    "pathEdges": list(s.contraction.path_edges),
                    "newEdgeLabel": ideal_to_json(s.contraction.summed_label),
                    "labelOutsideOriginal": s.contraction.label_outside_original,
                    "vertexMap": list(s.vertex_map),
                }
            )
    return {
        "reduced": graph_to_json(r.reduced),
        "genus": len(r.reduced.edges) - r.reduced.vertex_count + 1,
        "steps": steps,
        "vertexMap": list(r.vertex_map),
        "labelSetExtended": r.label_set_extended,
    }


def decomposition_to_json(d) -> dict:
    return {
        "reduction": reduction_to_json(d.reduction),
        "reducedModule": module_to_json(d.reduced_module),
        "liftedReducedGenerators": [
            spline_to_json(s) for s in d.lifted_reduced_generators
        ],
        "kernelParts": [
            {
                "kind": p.kind,
                "stepIndex": p.step_index,
                "piece": graph_to_json(p.piece),
                "basepoint": p.basepoint,
                "module": module_to_json(p.module),
                "liftedGenerators": [
                    spline_to_json(s) for s in p.lifted_generators
                ],
                "flowUp": p.flow_up,
            }
            for p in d.kernel_parts
        ],
        "sizes": {
            "total": d.total_size,
            "reduced": d.reduced_module.z_rank,
            "kernel": [p.module.z_rank for p in d.kernel_parts],
        },
    }


def module_to_json(m: SplineModule) -> dict:
    structure = m.structure
    if isinstance(structure, FieldDim):
        struct_doc = {"kind": "fieldDimension", "dimension": structure.dimension}
    elif isinstance(structure, FreeRank):
        struct_doc = {"kind": "freeRank", "rank": structure.rank}
    elif isinstance(structure, InvariantFactors):
        struct_doc = {
            "kind": "invariantFactors",
            "factors": list(structure.factors),
        }
    else:
        raise DocumentError(f"module structure: cannot serialize {structure!r}")
    return {
        "generators": [spline_to_json(g) for g in m.generators],
        "structure": struct_doc,
        "zRank": m.z_rank,
    }
