"""Invariant suites behind the ``verify`` command.

Each suite runs a family of cross-checks over a corpus of edge-labeled
graphs and reports per-suite counts and failures:

  * oracle equivalence: on small finite rings, the set of tuples passing
    the edge conditions equals the set spanned by the computed
    generators (full enumeration both ways);
  * functoriality: expansions along composed contractions agree with
    composed expansions, and all expansions are splines;
  * additivity: the genus-reduction decomposition sizes add up;
  * closed forms: the known tree formulas hold on small prefixes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .corpus import connected_multigraphs
from .dyckseries import closed_form_check
from .errors import GraphSplinesError
from .graphs import LabeledGraph, contract_edges, compose_contractions, genus
from .rings import Ideal, IntegerRing, ModularRing, PrimeField
from .splinecore import (
    compute_spline_module,
    expand_values,
    is_spline,
    vertex_expansion,
    Spline,
)
from .decomp import spline_decomposition


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "checks": self.checks,
            "failures": self.failures,
            "warnings": self.warnings,
            "ok": self.ok,
        }


def _enumerate_module(m) -> set[tuple]:
    """Every value tuple in the span of the generators (finite rings)."""
    ring = m.graph.ring
    coeff_pool = [e for e in ring.elements()]
    tuples = set()
    zero = tuple(ring.zero for _ in range(m.graph.vertex_count))
    for coeffs in itertools.product(coeff_pool, repeat=len(m.generators)):
        acc = list(zero)
        for c, gen in zip(coeffs, m.generators):
            acc = [a + c * v for a, v in zip(acc, gen.values)]
        tuples.add(tuple(acc))
    return tuples


def suite_oracle_equivalence(
    graphs: list[tuple[str, LabeledGraph]], tuple_limit: int = 4096
) -> SuiteResult:
    result = SuiteResult("oracle-equivalence")
    for name, G in graphs:
        ring = G.ring
        if not getattr(ring, "is_finite", False):
            continue
        size = None
        if isinstance(ring, (ModularRing, PrimeField)):
            size = ring.n if isinstance(ring, ModularRing) else ring.p
        else:
            size = len(list(ring.elements()))
        if size ** G.vertex_count > tuple_limit:
            result.warnings.append(f"{name}: skipped, too many tuples")
            continue
        module = compute_spline_module(G)
        if size ** len(module.generators) > 4 * tuple_limit:
            result.warnings.append(f"{name}: skipped, too many generators")
            continue
        brute = set()
        for values in itertools.product(list(ring.elements()), repeat=G.vertex_count):
            if is_spline(G, values):
                brute.add(values)
        spanned = _enumerate_module(module)
        result.checks += 1
        if brute != spanned:
            result.failures.append(
                f"{name}: solver span disagrees with enumeration "
                f"({len(spanned)} vs {len(brute)} tuples)"
            )
    return result


def _random_acyclic_subset(G: LabeledGraph, rng: random.Random) -> set[int]:
    parent = list(range(G.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = set()
    candidates = [i for i, (a, b, _) in enumerate(G.edges) if a != b]
    rng.shuffle(candidates)
    for i in candidates:
        if rng.random() < 0.4:
            continue
        a, b, _ = G.edges[i]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            chosen.add(i)
    return chosen


def suite_functoriality(
    graphs: list[tuple[str, LabeledGraph]], rounds: int = 3, seed: int = 2024
) -> SuiteResult:
    result = SuiteResult("functoriality")
    rng = random.Random(seed)
    for name, G in graphs:
        for _ in range(rounds):
            first = _random_acyclic_subset(G, rng)
            mid, c1 = contract_edges(G, first)
            second = _random_acyclic_subset(mid, rng)
            top, c2 = contract_edges(mid, second)
            composed = compose_contractions(c2, c1)
            module = compute_spline_module(top)
            if not module.generators:
                continue
            gen = module.generators[rng.randrange(len(module.generators))]
            one_step = vertex_expansion(composed, gen)
            two_step = vertex_expansion(c1, vertex_expansion(c2, gen))
            result.checks += 1
            if one_step.values != two_step.values:
                result.failures.append(f"{name}: composed expansion mismatch")
            if not is_spline(G, one_step.values):
                result.failures.append(f"{name}: expansion not a spline")
    return result


def suite_additivity(graphs: list[tuple[str, LabeledGraph]]) -> SuiteResult:
    result = SuiteResult("additivity")
    for name, G in graphs:
        try:
            dec = spline_decomposition(G)
        except GraphSplinesError as exc:
            result.failures.append(f"{name}: {exc}")
            continue
        result.checks += 1
        g = genus(G)
        reduced = dec.reduction.reduced
        if g == 1 and not (
            reduced.vertex_count == 1 and len(reduced.edges) == 1
        ):
            result.failures.append(f"{name}: genus-1 reduction is not the loop")
        if g == 2:
            loops = sum(1 for a, b, _ in reduced.edges if a == b)
            fig8 = reduced.vertex_count == 1 and len(reduced.edges) == 2
            theta = (
                reduced.vertex_count == 2
                and len(reduced.edges) == 3
                and loops == 0
            )
            if not (fig8 or theta):
                result.failures.append(
                    f"{name}: genus-2 reduction is neither figure-eight nor theta"
                )
    return result


def suite_closed_forms() -> SuiteResult:
    result = SuiteResult("closed-forms")
    F2, F3 = PrimeField(2), PrimeField(3)
    Z4, Z9 = ModularRing(4), ModularRing(9)
    cases = [
        (F2, (Ideal(F2, ()), Ideal(F2, (1,))), 3),
        (F3, (Ideal(F3, ()), Ideal(F3, (1,))), 3),
        (Z4, (Ideal(Z4, (2,)),), 3),
        (Z9, (Ideal(Z9, ()), Ideal(Z9, (3,))), 2),
    ]
    for ring, ideals, max_pairs in cases:
        report = closed_form_check(ring, ideals, max_pairs)
        result.checks += report.words_checked
        for word, computed, expected in report.mismatches:
            result.failures.append(
                f"{ring.describe()} word {word}: {computed} != {expected}"
            )
    return result


def builtin_corpus() -> list[tuple[str, LabeledGraph]]:
    """Connected multigraphs with at most 4 edges and genus at most 2,
    over F_2, Z, and Z/4, each with three canonical label assignments."""
    shapes = connected_multigraphs(5, 4, max_genus=2)
    Z, Z4, F2 = IntegerRing(), ModularRing(4), PrimeField(2)
    ring_labels = [
        ("F2", F2, (Ideal(F2, ()), Ideal(F2, (1,)))),
        ("Z", Z, (Ideal(Z, (2,)), Ideal(Z, (3,)))),
        ("Z4", Z4, (Ideal(Z4, (2,)), Ideal(Z4, ()))),
    ]
    out = []
    for shape_idx, (n, edges) in enumerate(shapes):
        e = len(edges)
        assignments = [(0,) * e, (1,) * e, tuple(i % 2 for i in range(e))]
        for ring_name, ring, ideals in ring_labels:
            for k, labels in enumerate(dict.fromkeys(assignments)):
                G = LabeledGraph(
                    ring,
                    n,
                    tuple((a, b, l) for (a, b), l in zip(edges, labels)),
                    ideals,
                )
                out.append((f"{ring_name}/shape{shape_idx:03d}L{k}", G))
    return out


def run_suites(graphs: list[tuple[str, LabeledGraph]]) -> list[SuiteResult]:
    return [
        suite_oracle_equivalence(graphs),
        suite_functoriality(graphs),
        suite_additivity(graphs),
        suite_closed_forms(),
    ]
