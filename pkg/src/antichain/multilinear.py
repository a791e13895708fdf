"""Exact multilinear polynomial arithmetic over the rationals.

A polynomial is a map from monomials (squarefree, so each monomial is a
subset of variables, stored as a bit mask) to nonzero Fraction
coefficients.  Multiplication reduces on the fly by unioning monomial
supports, which keeps every intermediate multilinear.  Evaluation is only
ever needed on 0/1 points, where the reduction is value-preserving.

Rank of a polynomial system is computed exactly: rows are cleared of
denominators and reduced by fraction-free (Bareiss) elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional, Sequence, Union

from .setfam import SetWord, canonical_key

Rational = Fraction


class DegreeCapExceeded(ValueError):
    """A polynomial has a monomial above the declared degree cap."""


@dataclass(frozen=True)
class LinearForm:
    """The affine form x . b - shift, with 0/1 coefficient vector b."""

    b: SetWord
    shift: int

    @property
    def n(self) -> int:
        return self.b.n


class Poly:
    """Multilinear polynomial in n variables with Fraction coefficients.

    Treated as immutable: every operation returns a new Poly and no zero
    coefficient is ever stored.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[dict] = None):
        if not 1 <= n <= 64:
            raise ValueError(f"variable count {n} outside [1, 64]")
        clean: dict[int, Fraction] = {}
        for mask, coeff in (terms or {}).items():
            if mask < 0 or mask >> n:
                raise ValueError(f"monomial 0x{mask:x} outside variable range n={n}")
            c = Fraction(coeff)
            if c:
                clean[mask] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, c) -> "Poly":
        return cls(n, {0: Fraction(c)})

    @classmethod
    def monomial_mask(cls, n: int, mask: int) -> "Poly":
        return cls(n, {mask: Fraction(1)})

    @classmethod
    def variable(cls, n: int, i: int) -> "Poly":
        if not 1 <= i <= n:
            raise ValueError(f"variable index {i} outside [1, {n}]")
        return cls(n, {1 << (i - 1): Fraction(1)})

    @classmethod
    def from_linear_form(cls, form: LinearForm) -> "Poly":
        terms: dict[int, Fraction] = {}
        for i in range(form.n):
            if form.b.bits >> i & 1:
                terms[1 << i] = Fraction(1)
        if form.shift:
            terms[0] = Fraction(-form.shift)
        return cls(form.n, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Largest monomial cardinality; 0 for constants and the zero poly."""
        return max((m.bit_count() for m in self.terms), default=0)

    def _check(self, other: "Poly"):
        if self.n != other.n:
            raise ValueError(f"mixed variable counts: {self.n} vs {other.n}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for mask, c in other.terms.items():
            terms[mask] = terms.get(mask, Fraction(0)) + c
        return Poly(self.n, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for mask, c in other.terms.items():
            terms[mask] = terms.get(mask, Fraction(0)) - c
        return Poly(self.n, terms)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self.n, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        """Product with multilinear reduction (monomial supports are unioned)."""
        self._check(other)
        terms: dict[int, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = ma | mb
                terms[m] = terms.get(m, Fraction(0)) + ca * cb
        return Poly(self.n, terms)

    def evaluate(self, point: Union[SetWord, int]) -> Fraction:
        """Value at a 0/1 point: sum of coefficients of monomials inside it."""
        bits = point.bits if isinstance(point, SetWord) else point
        total = Fraction(0)
        for mask, c in self.terms.items():
            if mask & ~bits == 0:
                total += c
        return total

    def substitute_one(self, i: int) -> "Poly":
        """Set variable i to 1: drop it from every monomial, merging collisions."""
        if not 1 <= i <= self.n:
            raise ValueError(f"variable index {i} outside [1, {self.n}]")
        bit = 1 << (i - 1)
        terms: dict[int, Fraction] = {}
        for mask, c in self.terms.items():
            m = mask & ~bit
            terms[m] = terms.get(m, Fraction(0)) + c
        return Poly(self.n, terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.n == other.n and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return f"Poly(0, n={self.n})"
        bits = []
        for mask in sorted(self.terms, key=canonical_key):
            mono = "*".join(f"x{i + 1}" for i in range(self.n) if mask >> i & 1) or "1"
            bits.append(f"{self.terms[mask]}*{mono}")
        return f"Poly({' + '.join(bits)}, n={self.n})"

    def to_obj(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {
                    "monomial": [i + 1 for i in range(self.n) if mask >> i & 1],
                    "coeff": str(self.terms[mask]),
                }
                for mask in sorted(self.terms, key=canonical_key)
            ],
        }


def monomial(t: SetWord) -> Poly:
    """The product of the variables indexed by t (1 for the empty set)."""
    return Poly.monomial_mask(t.n, t.bits)


def product_reduced(factors: Sequence[LinearForm], n: Optional[int] = None) -> Poly:
    """Multilinear reduction of a product of linear forms.

    The empty product is the constant 1; its variable count must then be
    supplied explicitly.
    """
    if not factors:
        if n is None:
            raise ValueError("empty product needs an explicit variable count")
        return Poly.constant(n, 1)
    nn = factors[0].n
    if n is not None and n != nn:
        raise ValueError(f"explicit n={n} disagrees with factors over n={nn}")
    acc = Poly.constant(nn, 1)
    for form in factors:
        if form.n != nn:
            raise ValueError("factors over mixed variable counts")
        acc = acc * Poly.from_linear_form(form)
    return acc


def mixed_form_product(a: SetWord, b: SetWord, shifts: Sequence[int]) -> Poly:
    """Reduced product of factors  x.b + (1 - x).a - shift.

    a and b must have disjoint supports (they are the indicators of a set
    and of its complement in the intended use).  Each factor is affine:
    x.b - x.a + (|a| - shift).
    """
    if a.n != b.n:
        raise ValueError("mixed ground sets")
    if a.bits & b.bits:
        raise ValueError("supports of a and b overlap")
    n = a.n
    acc = Poly.constant(n, 1)
    for shift in shifts:
        terms: dict[int, Fraction] = {}
        for i in range(n):
            if b.bits >> i & 1:
                terms[1 << i] = Fraction(1)
            elif a.bits >> i & 1:
                terms[1 << i] = Fraction(-1)
        const = len(a) - shift
        if const:
            terms[0] = Fraction(const)
        acc = acc * Poly(n, terms)
    return acc


def evaluate(poly: Poly, point: Union[SetWord, int]) -> Fraction:
    return poly.evaluate(point)


def substitute_one(poly: Poly, i: int) -> Poly:
    return poly.substitute_one(i)


def monomial_basis(n: int, degree_cap: int) -> list[int]:
    """Masks of all monomials of degree <= cap, by (cardinality, value)."""
    basis = []
    for size in range(min(degree_cap, n) + 1):
        layer = []
        for combo in combinations(range(n), size):
            bits = 0
            for i in combo:
                bits |= 1 << i
            layer.append(bits)
        basis.extend(sorted(layer))
    return basis


def _integer_rows(polys: Sequence[Poly], col_of: dict[int, int], width: int) -> list[list[int]]:
    rows = []
    for p in polys:
        denom = lcm(*(c.denominator for c in p.terms.values())) if p.terms else 1
        row = [0] * width
        for mask, c in p.terms.items():
            row[col_of[mask]] = int(c * denom)
        rows.append(row)
    return rows


def integer_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = len(rows)
    if m == 0:
        return 0
    width = len(rows[0])
    mat = [row[:] for row in rows]
    rank = 0
    prev = 1
    r = 0
    for col in range(width):
        piv = None
        for i in range(r, m):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            mat[r], mat[piv] = mat[piv], mat[r]
        pivot = mat[r][col]
        for i in range(r + 1, m):
            head = mat[i][col]
            for c in range(col + 1, width):
                mat[i][c] = (mat[i][c] * pivot - head * mat[r][c]) // prev
            mat[i][col] = 0
        prev = pivot
        rank += 1
        r += 1
        if r == m:
            break
    return rank


def system_rank(polys: Sequence[Poly], degree_cap: int) -> int:
    """Exact rank of the coefficient matrix in the degree-capped basis."""
    if not polys:
        return 0
    n = polys[0].n
    for p in polys:
        if p.n != n:
            raise ValueError("polynomials over mixed variable counts")
        if p.degree() > degree_cap:
            raise DegreeCapExceeded(f"degree {p.degree()} exceeds cap {degree_cap}")
    basis = monomial_basis(n, degree_cap)
    col_of = {mask: i for i, mask in enumerate(basis)}
    return integer_rank(_integer_rows(polys, col_of, len(basis)))


def verify_triangular(polys: Sequence[Poly], points: Sequence[Union[SetWord, int]]) -> bool:
    """Nonzero diagonal and zero strict lower triangle of the evaluation matrix.

    A true verdict certifies linear independence of the system.
    """
    if len(polys) != len(points):
        raise ValueError("polys and points must pair up")
    for i, p in enumerate(polys):
        if p.evaluate(points[i]) == 0:
            return False
        for j in range(i):
            if p.evaluate(points[j]) != 0:
                return False
    return True
