"""Labeled Dyck words, plane trees, and Hilbert--Dyck series prefixes.

Words over s label symbols are properly nested parenthesis sequences in
which every closing symbol matches the label of its opening partner; they
are in bijection with plane rooted trees whose edges carry the labels.
Summing a per-tree module size over all words with n pairs produces the
coefficients of the Hilbert--Dyck series, computed here in two modes:
vector-space dimension over a field (or finite-dimensional algebra) and
integer rank over Z/p^k.

Per-tree sizes use the additive tree decomposition

    Spl(T) ~ R (+) sum over edges of the edge's ideal,

valid because a tree has no cycles to close: a spline is freely
determined by its root value and the per-edge differences.  Every prefix
computation cross-checks a sample of words against the generic solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import exactlinalg
from .errors import (
    ConsistencyError,
    ModeMismatch,
    NoClosedForm,
    NotDyck,
    PrefixTooShort,
)
from .exactlinalg import IntMatrix
from .graphs import LabeledGraph
from .rings import (
    Ideal,
    ModularRing,
    PrimeField,
    RingSpec,
    TruncatedPolynomialRing,
    ideal_coordinate_dimension,
    ideal_membership,
    ideals_equal,
)
from .splinecore import compute_spline_module

_CLOSE = 128  # byte offset marking a closing symbol


@dataclass(frozen=True)
class DyckWord:
    """A properly nested word; symbols are (is_open, label index) pairs."""

    symbols: tuple[tuple[bool, int], ...]

    def __post_init__(self):
        depth: list[int] = []
        for is_open, label in self.symbols:
            if is_open:
                depth.append(label)
            else:
                if not depth or depth[-1] != label:
                    raise NotDyck("unmatched or mislabeled closing symbol")
                depth.pop()
        if depth:
            raise NotDyck("unclosed opening symbol")

    @property
    def pairs(self) -> int:
        return len(self.symbols) // 2


@dataclass(frozen=True)
class PlaneLabeledTree:
    """Plane rooted tree; children are (edge label index, subtree) in order."""

    children: tuple[tuple[int, "PlaneLabeledTree"], ...] = ()

    @property
    def edge_count(self) -> int:
        return sum(1 + sub.edge_count for _, sub in self.children)


@dataclass(frozen=True)
class SeriesPrefix:
    """Initial coefficients of a Hilbert--Dyck series."""

    mode: str  # "dim" or "zrank"
    coefficients: tuple[int, ...]


@lru_cache(maxsize=None)
def _words_encoded(label_count: int, pairs: int) -> tuple[bytes, ...]:
    """All words with the given number of pairs, byte-encoded.

    A word is bytes with values label (open) and _CLOSE+label (close);
    generated as (first block)(rest), so the order is deterministic.
    """
    if pairs == 0:
        return (b"",)
    out = []
    for k in range(pairs):
        firsts = _words_encoded(label_count, k)
        rests = _words_encoded(label_count, pairs - 1 - k)
        for label in range(label_count):
            o, c = bytes([label]), bytes([_CLOSE + label])
            for w1 in firsts:
                head = o + w1 + c
                for w2 in rests:
                    out.append(head + w2)
    return tuple(out)


def _decode(word: bytes) -> DyckWord:
    return DyckWord(
        tuple((sym < _CLOSE, sym % _CLOSE) for sym in word)
    )


def _encode(word: DyckWord) -> bytes:
    return bytes(
        label if is_open else _CLOSE + label for is_open, label in word.symbols
    )


def enumerate_dyck_words(label_count: int, pairs: int) -> list[DyckWord]:
    """All words with the given pair count; there are s^n * Catalan(n)."""
    if label_count < 1:
        raise ValueError("need at least one label")
    if pairs < 0:
        raise ValueError("pair count must be nonnegative")
    return [_decode(w) for w in _words_encoded(label_count, pairs)]


def word_to_tree(w: DyckWord) -> PlaneLabeledTree:
    """The plane rooted tree whose blocks are the word's balanced factors."""

    def parse(pos: int) -> tuple[tuple, int]:
        children = []
        while pos < len(w.symbols) and w.symbols[pos][0]:
            label = w.symbols[pos][1]
            sub, pos = parse(pos + 1)
            if pos >= len(w.symbols) or w.symbols[pos] != (False, label):
                raise NotDyck("mismatched closing symbol")
            children.append((label, PlaneLabeledTree(sub)))
            pos += 1
        return tuple(children), pos

    children, pos = parse(0)
    if pos != len(w.symbols):
        raise NotDyck("trailing symbols after the last balanced block")
    return PlaneLabeledTree(children)


def tree_to_word(t: PlaneLabeledTree) -> DyckWord:
    symbols: list[tuple[bool, int]] = []

    def emit(node: PlaneLabeledTree) -> None:
        for label, sub in node.children:
            symbols.append((True, label))
            emit(sub)
            symbols.append((False, label))

    emit(t)
    return DyckWord(tuple(symbols))


def tree_to_graph(
    t: PlaneLabeledTree, ring: RingSpec, ideals: tuple[Ideal, ...]
) -> LabeledGraph:
    """The tree as an edge-labeled graph with depth-first vertex numbering."""
    edges: list[tuple[int, int, int]] = []
    counter = [0]

    def build(node: PlaneLabeledTree, my_id: int) -> None:
        for label, sub in node.children:
            counter[0] += 1
            child = counter[0]
            edges.append((my_id, child, label))
            build(sub, child)

    build(t, 0)
    return LabeledGraph(ring, counter[0] + 1, tuple(edges), ideals)


# ---------------------------------------------------------------------------
# per-tree sizes
# ---------------------------------------------------------------------------


def _mode_context(ring: RingSpec, ideals, mode: str):
    """Validate (ring, mode); return per-label size increments and the base."""
    if mode == "dim":
        if isinstance(ring, PrimeField):
            base = 1
        elif isinstance(ring, TruncatedPolynomialRing):
            base = ring.coord_length
        else:
            raise ModeMismatch(
                "dimension mode needs a field or a finite-dimensional algebra"
            )
        per_label = [ideal_coordinate_dimension(i) for i in ideals]
        return base, per_label
    if mode == "zrank":
        if not isinstance(ring, ModularRing) or ring.prime_power_base() is None:
            raise ModeMismatch("integer-rank mode needs Z/p^k coefficients")
        from .rings import _zmod_gcd

        base = 1
        per_label = [0 if _zmod_gcd(i) == ring.n else 1 for i in ideals]
        return base, per_label
    raise ModeMismatch(f"unknown mode {mode!r}")


def _solver_size(graph: LabeledGraph, mode: str) -> int:
    return compute_spline_module(graph).z_rank


def hilbert_dyck_prefix(
    ring: RingSpec,
    ideals,
    max_pairs: int,
    mode: str,
    cross_check_stride: int = 997,
) -> SeriesPrefix:
    """Coefficients a_0..a_N of the Hilbert--Dyck series.

    a_n sums the module size over every labeled plane tree with n edges,
    where size is the dimension over the base field (mode "dim") or the
    number of invariant factors (mode "zrank").  The cheap per-word size
    (ring size plus per-edge ideal sizes) is cross-checked against the
    generic solver on all small words and on a strided sample.
    """
    ideals = tuple(ideals)
    base, per_label = _mode_context(ring, ideals, mode)
    coefficients = []
    checked = 0
    for n in range(max_pairs + 1):
        total = 0
        for index, word in enumerate(_words_encoded(len(ideals), n)):
            value = base
            for sym in word:
                if sym < _CLOSE:
                    value += per_label[sym]
            total += value
            if n <= 2 or index % cross_check_stride == 0:
                tree = word_to_tree(_decode(word))
                direct = _solver_size(tree_to_graph(tree, ring, ideals), mode)
                if direct != value:
                    raise ConsistencyError(
                        f"tree size mismatch on word {word!r}: "
                        f"{value} (additive) vs {direct} (solver)"
                    )
                checked += 1
        coefficients.append(total)
    return SeriesPrefix(mode=mode, coefficients=tuple(coefficients))


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedFormReport:
    shape: str
    words_checked: int
    mismatches: tuple[tuple[str, int, int], ...]  # (word, computed, expected)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _is_zero_ideal(i: Ideal) -> bool:
    return not i.generators


def _is_unit_ideal(i: Ideal) -> bool:
    return ideal_membership(i.ring.one, i)


def _detect_shape(ring, ideals) -> tuple[str, int | None]:
    """(shape tag, index of the zero label or None)."""
    if isinstance(ring, PrimeField) and len(ideals) == 2:
        zeros = [k for k, i in enumerate(ideals) if _is_zero_ideal(i)]
        units = [k for k, i in enumerate(ideals) if _is_unit_ideal(i)]
        if len(zeros) == 1 and len(units) == 1:
            return "field-zero-unit", zeros[0]
    if isinstance(ring, ModularRing):
        p = ring.prime_power_base()
        if p is not None and ring.n == p * p:
            maximal = Ideal(ring, (p,))
            if len(ideals) == 1 and ideals_equal(ideals[0], maximal):
                return "p-squared-maximal", None
            if len(ideals) == 2:
                zeros = [k for k, i in enumerate(ideals) if _is_zero_ideal(i)]
                maxs = [k for k, i in enumerate(ideals) if ideals_equal(i, maximal)]
                if len(zeros) == 1 and len(maxs) == 1:
                    return "p-squared-zero-maximal", zeros[0]
    raise NoClosedForm(
        f"no closed form for {ring.describe()} with {len(ideals)} labels"
    )


def closed_form_check(ring, ideals, max_pairs: int) -> ClosedFormReport:
    """Compare every per-word module size against its known closed form.

    Covered shapes: F_p with one zero and one unit label (dimension is
    edges - zero-labeled edges + 1); Z/p^2 with all labels (p) (rank is
    the vertex count); Z/p^2 with labels (0) and (p) (rank is
    edges - zero-labeled edges + 1).
    """
    ideals = tuple(ideals)
    shape, zero_idx = _detect_shape(ring, ideals)
    mode = "dim" if shape == "field-zero-unit" else "zrank"
    mismatches = []
    checked = 0
    for n in range(max_pairs + 1):
        for word in _words_encoded(len(ideals), n):
            tree = word_to_tree(_decode(word))
            graph = tree_to_graph(tree, ring, ideals)
            computed = compute_spline_module(graph).z_rank
            if shape == "p-squared-maximal":
                expected = n + 1
            else:
                n0 = sum(1 for sym in word if sym == zero_idx)
                expected = n - n0 + 1
            checked += 1
            if computed != expected:
                mismatches.append((word.hex(), computed, expected))
    return ClosedFormReport(
        shape=shape, words_checked=checked, mismatches=tuple(mismatches)
    )


# ---------------------------------------------------------------------------
# marked words
# ---------------------------------------------------------------------------


def marked_word_count(label_count: int, pairs: int, zero_label: int = 0) -> int:
    """Number of words with one marked zero-labeled pair.

    Equals the sum of zero-label counts over all words with the given
    pair count; computed both by direct summation over the enumeration
    and by an independent recursion over marked words, which must agree.
    """
    if not 0 <= zero_label < label_count:
        raise ValueError("zero label out of range")
    direct = 0
    for word in _words_encoded(label_count, pairs):
        direct += sum(1 for sym in word if sym == zero_label)

    # recursion: U(n) counts words, M(n) counts words with one mark
    @lru_cache(maxsize=None)
    def unmarked(n: int) -> int:
        if n == 0:
            return 1
        return sum(
            label_count * unmarked(k) * unmarked(n - 1 - k) for k in range(n)
        )

    @lru_cache(maxsize=None)
    def marked(n: int) -> int:
        if n == 0:
            return 0
        total = 0
        for k in range(n):
            inner, rest = unmarked(k), unmarked(n - 1 - k)
            total += label_count * (marked(k) * rest + inner * marked(n - 1 - k))
            total += inner * rest  # the first pair itself carries the mark
        return total

    recursive = marked(pairs)
    if direct != recursive:
        raise ConsistencyError(
            f"marked word counts disagree: {direct} direct vs {recursive} recursive"
        )
    return direct


# ---------------------------------------------------------------------------
# algebraic relation guessing
# ---------------------------------------------------------------------------


def _series_mul(a: list[int], b: list[int], limit: int) -> list[int]:
    out = [0] * limit
    for i, x in enumerate(a):
        if x == 0 or i >= limit:
            continue
        for j, y in enumerate(b):
            if i + j >= limit:
                break
            out[i + j] += x * y
    return out


def guess_algebraic_relation(
    prefix, deg_x: int, deg_t: int
) -> list[list[int]] | None:
    """A nonzero integer polynomial P with P(F(t), t) = 0 mod t^(N+1).

    The prefix must supply at least (deg_x+1)*(deg_t+1) + 5 coefficients
    so that the matching system is overdetermined by five verification
    rows.  Returns the coefficient grid P[i][j] of x^i t^j, or None when
    only the zero polynomial fits; any returned relation is re-verified
    by exact series substitution over the full prefix.
    """
    coeffs = list(
        prefix.coefficients if isinstance(prefix, SeriesPrefix) else prefix
    )
    if deg_x < 0 or deg_t < 0 or (deg_x, deg_t) == (0, 0):
        raise ValueError("degree bounds must allow a nonconstant polynomial")
    needed = (deg_x + 1) * (deg_t + 1) + 5
    limit = len(coeffs)
    if limit < needed:
        raise PrefixTooShort(
            f"need at least {needed} coefficients, got {limit}"
        )
    powers = [[1] + [0] * (limit - 1)]
    for _ in range(deg_x):
        powers.append(_series_mul(powers[-1], coeffs, limit))
    columns = []
    labels = []
    for i in range(deg_x + 1):
        for j in range(deg_t + 1):
            col = [0] * limit
            for m in range(j, limit):
                col[m] = powers[i][m - j]
            columns.append(col)
            labels.append((i, j))
    rows = [[col[m] for col in columns] for m in range(limit)]
    kernel = exactlinalg.rational_nullspace(IntMatrix.from_rows(rows))
    if not kernel:
        return None
    solution = kernel[0]
    first = next(x for x in solution if x)
    if first < 0:
        solution = tuple(-x for x in solution)
    grid = [[0] * (deg_t + 1) for _ in range(deg_x + 1)]
    for (i, j), c in zip(labels, solution):
        grid[i][j] = c
    # independent re-verification by direct substitution
    acc = [0] * limit
    for i in range(deg_x + 1):
        for j in range(deg_t + 1):
            c = grid[i][j]
            if not c:
                continue
            term = powers[i]
            for m in range(j, limit):
                acc[m] += c * term[m - j]
    if any(acc):
        raise ConsistencyError("guessed relation fails substitution")
    return grid
