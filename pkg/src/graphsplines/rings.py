"""Concrete coefficient rings with canonical elements and decidable ideals.

Four families are implemented: the integers Z, modular rings Z/nZ, prime
fields F_p, and truncated polynomial algebras k[x_1..x_m]/(x_1..x_m)^d
over F_p or Q.  Each family stores elements in a canonical form and
decides ideal membership by elementary exact linear algebra (gcd
arithmetic for Z and Z/nZ, an exact linear solve in the finitely many
monomial coordinates for the truncated algebras).

Ideals are kept as generator lists and never canonicalized to a unique
form; equality of ideals is extensional (two-way membership of the
generators).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from . import exactlinalg
from .errors import InvalidModulus, RingMismatch, UnsupportedRing


@dataclass(frozen=True)
class RationalField:
    """The rationals; allowed only as a base field for truncated algebras."""

    def coerce(self, value) -> Fraction:
        return Fraction(value)

    def describe(self) -> str:
        return "Q"


@dataclass(frozen=True)
class IntegerRing:
    """The ring of integers."""

    def element(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            _require_same_ring(value.ring, self)
            return value
        return RingElement(self, int(value))

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, 0)

    @property
    def one(self) -> "RingElement":
        return RingElement(self, 1)

    def add_payload(self, a, b):
        return a + b

    def neg_payload(self, a):
        return -a

    def mul_payload(self, a, b):
        return a * b

    @property
    def coord_length(self) -> int:
        return 1

    def payload_coords(self, payload) -> list[int]:
        return [payload]

    def payload_from_coords(self, coords):
        return int(coords[0])

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self):
        raise UnsupportedRing("Z is infinite; cannot enumerate its elements")

    def describe(self) -> str:
        return "Z"


@dataclass(frozen=True)
class ModularRing:
    """Z/nZ for n >= 2; elements are residues in [0, n)."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise InvalidModulus(f"modulus {self.n} must be at least 2")

    def element(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            _require_same_ring(value.ring, self)
            return value
        return RingElement(self, int(value) % self.n)

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, 0)

    @property
    def one(self) -> "RingElement":
        return RingElement(self, 1 % self.n)

    def add_payload(self, a, b):
        return (a + b) % self.n

    def neg_payload(self, a):
        return (-a) % self.n

    def mul_payload(self, a, b):
        return (a * b) % self.n

    @property
    def coord_length(self) -> int:
        return 1

    def payload_coords(self, payload) -> list[int]:
        return [payload]

    def payload_from_coords(self, coords):
        return int(coords[0]) % self.n

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self):
        return (RingElement(self, i) for i in range(self.n))

    def prime_power_base(self) -> int | None:
        """The prime p when n is a prime power p^k, else None."""
        n = self.n
        for p in range(2, n + 1):
            if p * p > n:
                return n  # n itself is prime
            if n % p == 0:
                while n % p == 0:
                    n //= p
                return p if n == 1 else None
        return None

    def describe(self) -> str:
        return f"Z/{self.n}"


@dataclass(frozen=True)
class PrimeField:
    """The field F_p; elements are residues in [0, p)."""

    p: int

    def __post_init__(self):
        if not exactlinalg._is_prime(self.p):
            raise InvalidModulus(f"{self.p} is not prime")

    def element(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            _require_same_ring(value.ring, self)
            return value
        return RingElement(self, int(value) % self.p)

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, 0)

    @property
    def one(self) -> "RingElement":
        return RingElement(self, 1)

    def add_payload(self, a, b):
        return (a + b) % self.p

    def neg_payload(self, a):
        return (-a) % self.p

    def mul_payload(self, a, b):
        return (a * b) % self.p

    def coerce(self, value) -> int:
        return int(value) % self.p

    @property
    def coord_length(self) -> int:
        return 1

    def payload_coords(self, payload) -> list[int]:
        return [payload]

    def payload_from_coords(self, coords):
        return int(coords[0]) % self.p

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self):
        return (RingElement(self, i) for i in range(self.p))

    def describe(self) -> str:
        return f"F_{self.p}"


@dataclass(frozen=True)
class TruncatedPolynomialRing:
    """k[x_1..x_m] modulo total degree >= d, with k = F_p or Q.

    Elements are stored as sorted tuples of (exponent vector, coefficient)
    with zero coefficients dropped; the monomial basis consists of all
    exponent vectors of total degree < d.
    """

    base: PrimeField | RationalField
    nvars: int
    degree: int

    def __post_init__(self):
        if not isinstance(self.base, (PrimeField, RationalField)):
            raise UnsupportedRing("base field must be F_p or Q")
        if self.nvars < 1:
            raise ValueError("need at least one variable")
        if self.degree < 1:
            raise ValueError("truncation degree must be at least 1")

    @cached_property
    def monomials(self) -> tuple[tuple[int, ...], ...]:
        """All exponent vectors of total degree < degree, graded-lex order."""
        out = []
        for total in range(self.degree):
            out.extend(self._exponents_of_degree(total))
        return tuple(out)

    def _exponents_of_degree(self, total: int) -> list[tuple[int, ...]]:
        if self.nvars == 1:
            return [(total,)]
        combos = []
        for head in range(total, -1, -1):
            for tail in TruncatedPolynomialRing(
                self.base, self.nvars - 1, self.degree
            )._exponents_of_degree(total - head):
                combos.append((head,) + tail)
        return combos

    @cached_property
    def _monomial_index(self) -> dict[tuple[int, ...], int]:
        return {m: i for i, m in enumerate(self.monomials)}

    def _coeff(self, value):
        return self.base.coerce(value)

    def _canonical(self, terms: dict) -> tuple:
        items = []
        for exps, c in terms.items():
            if c:
                items.append((exps, c))
        items.sort(key=lambda t: (sum(t[0]), t[0]))
        return tuple(items)

    def element(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            _require_same_ring(value.ring, self)
            return value
        terms: dict = {}
        const = (0,) * self.nvars
        if isinstance(value, (int, Fraction)) or isinstance(value, str):
            c = self._coeff(value)
            if c:
                terms[const] = c
        else:
            # iterable of (coefficient, exponent vector) pairs
            for coeff, exps in value:
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.nvars or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps}")
                if sum(exps) >= self.degree:
                    continue  # truncated away
                c = self.base.coerce(coeff) if isinstance(self.base, RationalField) else self.base.coerce(coeff)
                acc = terms.get(exps)
                combined = c if acc is None else self._coeff_add(acc, c)
                if combined:
                    terms[exps] = combined
                elif exps in terms:
                    del terms[exps]
        return RingElement(self, self._canonical(terms))

    def _coeff_add(self, a, b):
        if isinstance(self.base, PrimeField):
            return (a + b) % self.base.p
        return a + b

    def _coeff_mul(self, a, b):
        if isinstance(self.base, PrimeField):
            return (a * b) % self.base.p
        return a * b

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, ())

    @property
    def one(self) -> "RingElement":
        return self.element(1)

    def variable(self, i: int) -> "RingElement":
        """The generator x_{i+1}, or zero when the degree truncates it."""
        if not 0 <= i < self.nvars:
            raise ValueError("variable index out of range")
        exps = tuple(int(j == i) for j in range(self.nvars))
        return self.element([(1, exps)])

    def add_payload(self, a, b):
        terms = dict(a)
        for exps, c in b:
            acc = terms.get(exps)
            combined = c if acc is None else self._coeff_add(acc, c)
            if combined:
                terms[exps] = combined
            elif exps in terms:
                del terms[exps]
        return self._canonical(terms)

    def neg_payload(self, a):
        return tuple((exps, self._coeff_mul(c, self._coeff(-1))) for exps, c in a)

    def mul_payload(self, a, b):
        terms: dict = {}
        for e1, c1 in a:
            for e2, c2 in b:
                exps = tuple(x + y for x, y in zip(e1, e2))
                if sum(exps) >= self.degree:
                    continue
                c = self._coeff_mul(c1, c2)
                acc = terms.get(exps)
                combined = c if acc is None else self._coeff_add(acc, c)
                if combined:
                    terms[exps] = combined
                elif exps in terms:
                    del terms[exps]
        return self._canonical(terms)

    @property
    def coord_length(self) -> int:
        return len(self.monomials)

    def payload_coords(self, payload) -> list:
        zero = 0 if isinstance(self.base, PrimeField) else Fraction(0)
        coords = [zero] * len(self.monomials)
        index = self._monomial_index
        for exps, c in payload:
            coords[index[exps]] = c
        return coords

    def payload_from_coords(self, coords):
        terms = {}
        for m, c in zip(self.monomials, coords):
            c = self._coeff(c)
            if c:
                terms[m] = c
        return self._canonical(terms)

    @property
    def is_finite(self) -> bool:
        return isinstance(self.base, PrimeField)

    def elements(self):
        if not isinstance(self.base, PrimeField):
            raise UnsupportedRing("cannot enumerate elements over Q")
        p = self.base.p
        mons = self.monomials
        for coeffs in itertools.product(range(p), repeat=len(mons)):
            yield RingElement(self, self.payload_from_coords(coeffs))

    def describe(self) -> str:
        return f"{self.base.describe()}[{self.nvars} vars]/deg<{self.degree}"


RingSpec = IntegerRing | ModularRing | PrimeField | TruncatedPolynomialRing


def _require_same_ring(a, b) -> None:
    if a != b:
        raise RingMismatch(f"ring mismatch: {a} vs {b}")


@dataclass(frozen=True)
class RingElement:
    """A canonical-form element of one of the supported rings."""

    ring: RingSpec
    payload: object

    def _binary(self, other, op):
        if not isinstance(other, RingElement):
            return NotImplemented
        _require_same_ring(self.ring, other.ring)
        return RingElement(self.ring, op(self.payload, other.payload))

    def __add__(self, other):
        return self._binary(other, self.ring.add_payload)

    def __sub__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        _require_same_ring(self.ring, other.ring)
        return RingElement(
            self.ring,
            self.ring.add_payload(self.payload, self.ring.neg_payload(other.payload)),
        )

    def __mul__(self, other):
        return self._binary(other, self.ring.mul_payload)

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg_payload(self.payload))

    def is_zero(self) -> bool:
        return self == self.ring.zero

    def coords(self) -> list:
        return self.ring.payload_coords(self.payload)

    def __repr__(self):
        return f"RingElement({self.ring.describe()}, {self.payload!r})"


@dataclass(frozen=True)
class Ideal:
    """A finitely generated ideal, stored by its (nonzero) generators."""

    ring: RingSpec
    generators: tuple

    def __post_init__(self):
        gens = []
        for g in self.generators:
            elem = g if isinstance(g, RingElement) else self.ring.element(g)
            _require_same_ring(elem.ring, self.ring)
            if not elem.is_zero():
                gens.append(elem)
        object.__setattr__(self, "generators", tuple(gens))

    def is_zero(self) -> bool:
        return not self.generators

    def __repr__(self):
        gens = ", ".join(repr(g.payload) for g in self.generators)
        return f"Ideal({self.ring.describe()}, [{gens}])"


def _zmod_gcd(ideal: Ideal) -> int:
    """d with the ideal of Z/n equal to (d); d | n and d = n means zero."""
    n = ideal.ring.n
    d = n
    for g in ideal.generators:
        d = gcd(d, g.payload)
    return d


def ideal_membership(element: RingElement, ideal: Ideal) -> bool:
    """Whether the element lies in the ideal generated by the generators."""
    _require_same_ring(element.ring, ideal.ring)
    ring = ideal.ring
    if isinstance(ring, IntegerRing):
        g = 0
        for gen in ideal.generators:
            g = gcd(g, gen.payload)
        return element.payload % g == 0 if g else element.payload == 0
    if isinstance(ring, ModularRing):
        return element.payload % _zmod_gcd(ideal) == 0
    if isinstance(ring, PrimeField):
        return bool(ideal.generators) or element.is_zero()
    if isinstance(ring, TruncatedPolynomialRing):
        return membership_certificate(element, ideal) is not None
    raise UnsupportedRing(f"unsupported ring {ring!r}")


def _gcd_combination(values: list[int]) -> tuple[int, list[int]]:
    """gcd of the values together with coefficients expressing it."""
    g = 0
    coeffs: list[int] = []
    for v in values:
        if g == 0:
            g, x, y = exactlinalg._xgcd(v, 0)
            coeffs = [c * 0 for c in coeffs] + [x]
        else:
            g2, x, y = exactlinalg._xgcd(g, v)
            coeffs = [c * x for c in coeffs] + [y]
            g = g2
    return g, coeffs


def membership_certificate(
    element: RingElement, ideal: Ideal
) -> tuple[RingElement, ...] | None:
    """Coefficients c_i with sum(c_i * g_i) = element, or None.

    The tuple has one entry per stored generator; for the zero ideal the
    empty tuple certifies membership of zero.
    """
    _require_same_ring(element.ring, ideal.ring)
    ring = ideal.ring
    gens = ideal.generators
    if isinstance(ring, IntegerRing):
        if not gens:
            return () if element.payload == 0 else None
        g, coeffs = _gcd_combination([gen.payload for gen in gens])
        if element.payload % g:
            return None
        k = element.payload // g
        return tuple(ring.element(c * k) for c in coeffs)
    if isinstance(ring, ModularRing):
        if element.payload % _zmod_gcd(ideal):
            return None
        values = [gen.payload for gen in gens] + [ring.n]
        g, coeffs = _gcd_combination(values)
        k = element.payload // g
        return tuple(ring.element(c * k) for c in coeffs[:-1])
    if isinstance(ring, PrimeField):
        if not gens:
            return () if element.is_zero() else None
        inv = pow(gens[0].payload, ring.p - 2, ring.p)
        first = ring.element(element.payload * inv)
        return (first,) + tuple(ring.zero for _ in gens[1:])
    if isinstance(ring, TruncatedPolynomialRing):
        return _truncpoly_certificate(element, ideal)
    raise UnsupportedRing(f"unsupported ring {ring!r}")


def _truncpoly_certificate(element, ideal):
    ring = ideal.ring
    gens = ideal.generators
    if not gens:
        return () if element.is_zero() else None
    columns = []
    meta = []  # (generator index, monomial)
    for gi, g in enumerate(gens):
        for mono in ring.monomials:
            prod = ring.mul_payload(((mono, ring._coeff(1)),), g.payload)
            col = ring.payload_coords(prod)
            if any(col):
                columns.append(col)
                meta.append((gi, mono))
    nrows = ring.coord_length
    rows = [[col[r] for col in columns] for r in range(nrows)]
    target = element.coords()
    if isinstance(ring.base, PrimeField):
        sol = exactlinalg.solve_mod_p_rows(rows, len(columns), target, ring.base.p)
    else:
        sol = exactlinalg.solve_rational_rows(rows, len(columns), target)
    if sol is None:
        return None
    parts: list[list] = [[] for _ in gens]
    for (gi, mono), c in zip(meta, sol):
        if c:
            parts[gi].append((c, mono))
    return tuple(ring.element(part) for part in parts)


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    """The ideal generated by both generator lists."""
    _require_same_ring(I.ring, J.ring)
    return Ideal(I.ring, I.generators + J.generators)


def ideals_equal(I: Ideal, J: Ideal) -> bool:
    """Extensional equality: each generator lies in the other ideal."""
    if I.ring != J.ring:
        return False
    return all(ideal_membership(g, J) for g in I.generators) and all(
        ideal_membership(g, I) for g in J.generators
    )


def ideal_quotient_presentation(ideal: Ideal) -> list[list]:
    """Columns presenting the ideal inside the additive form of the ring.

    For Z and Z/nZ the returned integer columns span a sublattice of the
    coordinate lattice (the modulus is included as a column for Z/nZ);
    membership of an element is membership of its coordinate vector in the
    column lattice.  For F_p and the truncated algebras the columns span
    the ideal as a subspace over the base field.
    """
    ring = ideal.ring
    if isinstance(ring, IntegerRing):
        return [[g.payload] for g in ideal.generators]
    if isinstance(ring, ModularRing):
        return [[g.payload] for g in ideal.generators] + [[ring.n]]
    if isinstance(ring, PrimeField):
        return [[g.payload] for g in ideal.generators]
    if isinstance(ring, TruncatedPolynomialRing):
        columns = []
        for g in ideal.generators:
            for mono in ring.monomials:
                prod = ring.mul_payload(((mono, ring._coeff(1)),), g.payload)
                col = ring.payload_coords(prod)
                if any(col):
                    columns.append(col)
        return columns
    raise UnsupportedRing(f"unsupported ring {ring!r}")


def ideal_coordinate_dimension(ideal: Ideal) -> int:
    """Dimension of the ideal as a subspace over the base field.

    Only meaningful for F_p and truncated polynomial coefficients, where
    the ring is a finite-dimensional vector space over its base field.
    """
    ring = ideal.ring
    if isinstance(ring, PrimeField):
        return 1 if ideal.generators else 0
    if isinstance(ring, TruncatedPolynomialRing):
        columns = ideal_quotient_presentation(ideal)
        if not columns:
            return 0
        if isinstance(ring.base, PrimeField):
            rref, pivots = exactlinalg._rref_mod_p(
                [list(c) for c in columns], ring.base.p
            )
        else:
            rref, pivots = exactlinalg._rref_rational([list(c) for c in columns])
        return len(pivots)
    raise UnsupportedRing("coordinate dimension needs a field-based ring")
