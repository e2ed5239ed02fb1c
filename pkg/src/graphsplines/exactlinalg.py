"""Exact linear algebra over the integers, prime fields, and the rationals.

Everything here computes with arbitrary-precision Python integers or
:class:`fractions.Fraction`; no floating point is used anywhere.  These
routines back every module computation in the package: Smith normal form
supplies integer kernels and invariant factors, Hermite normal form
canonicalizes lattices, and exact eliminations provide nullspaces over
prime fields and the rationals.

Pivot selection is deterministic throughout (smallest nonzero absolute
value, then lowest row, then lowest column), so identical inputs always
produce identical outputs.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InvalidModulus


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: return (g, x, y) with g = x*a + y*b and g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix; entries stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match matrix shape")

    @staticmethod
    def from_rows(rows: list[list[int]]) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        flat: list[int] = []
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in row)
        return IntMatrix(nrows, ncols, tuple(flat))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("incompatible shapes for matrix product")
        out: list[int] = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.at(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vector) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(
            sum(self.at(i, k) * vector[k] for k in range(self.cols))
            for i in range(self.rows)
        )


def determinant(A: IntMatrix) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    if A.rows != A.cols:
        raise ValueError("determinant requires a square matrix")
    n = A.rows
    if n == 0:
        return 1
    M = A.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if pivot is None:
                return 0
            M[k], M[pivot] = M[pivot], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SNFResult:
    """Smith normal form U*A*V = D with U, V unimodular and D diagonal.

    The diagonal entries are nonnegative and each divides the next.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        k = min(self.D.rows, self.D.cols)
        return tuple(self.D.at(i, i) for i in range(k))


def smith_normal_form(A: IntMatrix) -> SNFResult:
    """Compute the Smith normal form of an integer matrix.

    Row and column operations are accumulated into unimodular transforms
    U (rows) and V (columns) so that U*A*V equals the returned diagonal
    matrix.  The pivot at each stage is the entry of smallest nonzero
    absolute value (ties broken by lowest row, then column), which keeps
    the output reproducible and the intermediate entries reasonably small.
    """
    m, n = A.rows, A.cols
    D = A.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def add_row(src: int, dst: int, c: int) -> None:
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src: int, dst: int, c: int) -> None:
        for r in D:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    def place_pivot(t: int) -> bool:
        best = None
        where = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v:
                    key = (abs(v), i, j)
                    if best is None or key < best:
                        best, where = key, (i, j)
        if where is None:
            return False
        i, j = where
        if i != t:
            D[t], D[i] = D[i], D[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for r in D:
                r[t], r[j] = r[j], r[t]
            for r in V:
                r[t], r[j] = r[j], r[t]
        return True

    for t in range(min(m, n)):
        if not place_pivot(t):
            break
        while True:
            if D[t][t] < 0:
                D[t] = [-x for x in D[t]]
                U[t] = [-x for x in U[t]]
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(t, i, -q)
                if D[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(t, j, -q)
                if D[t][j]:
                    dirty = True
            if dirty:
                # A remainder smaller than the pivot appeared; restart the
                # stage with the new smallest entry as pivot.
                place_pivot(t)
                continue
            violator = None
            for i in range(t + 1, m):
                row = D[i]
                if any(row[j] % p for j in range(t + 1, n)):
                    violator = i
                    break
            if violator is None:
                break
            # Pull a non-divisible entry into the pivot row and keep going;
            # the next rounds shrink the pivot to the gcd.
            add_row(violator, t, 1)

    return SNFResult(
        U=IntMatrix.from_rows(U) if m else IntMatrix.zeros(0, 0),
        D=IntMatrix.from_rows(D) if m else IntMatrix.zeros(0, n),
        V=IntMatrix.from_rows(V),
    )


def integer_kernel(A: IntMatrix) -> list[tuple[int, ...]]:
    """Lattice basis of the integer kernel {x : A*x = 0}.

    Returned in canonical Hermite form; the count equals cols - rank(A).
    """
    snf = smith_normal_form(A)
    diag = snf.diagonal
    n = A.cols
    free = [j for j in range(n) if j >= len(diag) or diag[j] == 0]
    vecs = [tuple(snf.V.at(i, j) for i in range(n)) for j in free]
    return lattice_hnf(vecs)


def _hnf_insert(basis: list[list[int]], pivots: list[int], vec: list[int]) -> None:
    while True:
        j = next((k for k, x in enumerate(vec) if x), None)
        if j is None:
            return
        pos = bisect_left(pivots, j)
        if pos == len(pivots) or pivots[pos] != j:
            if vec[j] < 0:
                vec = [-x for x in vec]
            basis.insert(pos, vec)
            pivots.insert(pos, j)
            return
        row = basis[pos]
        a, b = row[j], vec[j]
        if b % a == 0:
            q = b // a
            vec = [x - q * y for x, y in zip(vec, row)]
        else:
            g, x, y = _xgcd(a, b)
            new_row = [x * u + y * v for u, v in zip(row, vec)]
            vec = [(a // g) * v - (b // g) * u for u, v in zip(row, vec)]
            basis[pos] = new_row


def lattice_hnf(generators) -> list[tuple[int, ...]]:
    """Canonical Hermite-form basis of the lattice spanned by the inputs.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot), and rows are ordered by pivot column.  The output depends
    only on the spanned lattice, so the map is idempotent and insensitive
    to the order of the generators.
    """
    vectors = [list(v) for v in generators if any(v)]
    if not vectors:
        return []
    dim = len(vectors[0])
    if any(len(v) != dim for v in vectors):
        raise ValueError("generators must share a common dimension")
    basis: list[list[int]] = []
    pivots: list[int] = []
    for vec in vectors:
        _hnf_insert(basis, pivots, vec)
    for idx in range(len(basis)):
        c = pivots[idx]
        p = basis[idx][c]
        for k in range(idx):
            q = basis[k][c] // p
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[idx])]
    return [tuple(row) for row in basis]


def lattice_contains(basis, vector) -> bool:
    """Whether the vector lies in the lattice spanned by a Hermite basis."""
    res = list(vector)
    for row in basis:
        c = next((k for k, x in enumerate(row) if x), None)
        if c is None:
            continue
        if res[c] % row[c] == 0:
            q = res[c] // row[c]
            if q:
                res = [a - q * b for a, b in zip(res, row)]
    return not any(res)


def _rref_mod_p(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over F_p; returns (nonzero rows, pivot cols)."""
    mat = [[x % p for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = pow(mat[r][c], p - 2, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def _rref_rational(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot cols)."""
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace_mod_p_rows(rows: list[list[int]], ncols: int, p: int) -> list[tuple[int, ...]]:
    """Row-based variant of :func:`nullspace_mod_p` (no shape wrapper)."""
    if not _is_prime(p):
        raise InvalidModulus(f"modulus {p} is not prime")
    rref, pivots = _rref_mod_p(rows, p) if rows else ([], [])
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(rref, pivots):
            v[c] = (-row[f]) % p
        basis.append(tuple(v))
    return basis


def nullspace_mod_p(A: IntMatrix, p: int) -> list[tuple[int, ...]]:
    """Basis of the right nullspace of A over F_p.

    The basis comes from the reduced echelon form (one vector per free
    column), so its size is cols - rank_p(A).
    """
    return nullspace_mod_p_rows(A.to_rows(), A.cols, p)


def _primitive(vec: list[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector."""
    denom = 1
    for x in vec:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def nullspace_rational_rows(rows, ncols: int) -> list[tuple[int, ...]]:
    """Row-based variant of :func:`rational_nullspace`; rows may hold Fractions."""
    rref, pivots = _rref_rational(rows) if rows else ([], [])
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(rref, pivots):
            v[c] = -row[f]
        basis.append(_primitive(v))
    return basis


def rational_nullspace(A: IntMatrix) -> list[tuple[int, ...]]:
    """Exact basis of {v : A*v = 0} over Q, scaled to primitive integers."""
    return nullspace_rational_rows(A.to_rows(), A.cols)


def solve_integer(A: IntMatrix, b) -> tuple[int, ...] | None:
    """One integer solution of A*x = b, or None if there is none."""
    if len(b) != A.rows:
        raise ValueError("right-hand side length does not match row count")
    snf = smith_normal_form(A)
    m, n = A.rows, A.cols
    ub = snf.U.apply(tuple(b)) if m else ()
    diag = snf.diagonal
    y = [0] * n
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d:
            q, r = divmod(ub[i], d)
            if r:
                return None
            y[i] = q
        elif ub[i]:
            return None
    return tuple(
        sum(snf.V.at(i, j) * y[j] for j in range(n)) for i in range(n)
    )


def solve_mod_p_rows(rows, ncols: int, b, p: int) -> tuple[int, ...] | None:
    """Row-based variant of :func:`solve_mod_p`."""
    if not _is_prime(p):
        raise InvalidModulus(f"modulus {p} is not prime")
    if len(b) != len(rows):
        raise ValueError("right-hand side length does not match row count")
    aug = [list(row) + [rhs] for row, rhs in zip(rows, b)]
    rref, pivots = _rref_mod_p(aug, p) if aug else ([], [])
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, c in zip(rref, pivots):
        x[c] = row[-1] % p
    return tuple(x)


def solve_mod_p(A: IntMatrix, b, p: int) -> tuple[int, ...] | None:
    """One solution of A*x = b over F_p, or None if inconsistent."""
    return solve_mod_p_rows(A.to_rows(), A.cols, b, p)


def solve_rational_rows(rows, ncols: int, b) -> tuple[Fraction, ...] | None:
    """Row-based variant of :func:`solve_rational`; entries may be Fractions."""
    if len(b) != len(rows):
        raise ValueError("right-hand side length does not match row count")
    aug = [list(row) + [rhs] for row, rhs in zip(rows, b)]
    rref, pivots = _rref_rational(aug) if aug else ([], [])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(rref, pivots):
        x[c] = row[-1]
    return tuple(x)


def solve_rational(A: IntMatrix, b) -> tuple[Fraction, ...] | None:
    """One solution of A*x = b over Q, or None if inconsistent."""
    return solve_rational_rows(A.to_rows(), A.cols, b)
