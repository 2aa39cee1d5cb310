"""The extension field F_{p^n} in a polynomial basis, q-polynomials over it,
and linear Gabidulin MRD codes over the prime field."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import (
    BadParameters,
    CompositeModulusBase,
    FieldDivisionByZero,
    FieldMismatch,
    TooLarge,
)
from .matrix import MatZ
from .ring import is_prime, make_ring

MAX_FIELD_SIZE = 2**16
MAX_CODE_SIZE = 2**20


def _poly_mod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` by the monic ``mod`` (coefficients low-degree first)."""
    a = list(a)
    deg = len(mod) - 1
    for top in range(len(a) - 1, deg - 1, -1):
        c = a[top] % p
        if c:
            shift = top - deg
            for i, mc in enumerate(mod):
                a[shift + i] = (a[shift + i] - c * mc) % p
    return [x % p for x in a[:deg]] + [0] * max(0, deg - len(a))


def _monic_polys(p: int, degree: int):
    """Monic polynomials of a given degree ordered by their base-p value."""
    for low in itertools.product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for fdeg in range(1, deg // 2 + 1):
        for f in _monic_polys(p, fdeg):
            if not any(_poly_mod(poly, f, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """F_{p^n} as Z_p[x] modulo ``irreducible`` (monic, low-degree first)."""

    p: int
    n: int
    irreducible: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p**self.n

    def element(self, coeffs: Sequence[int]) -> FieldElement:
        coeffs = tuple(c % self.p for c in coeffs)
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coeffs)}")
        return FieldElement(coeffs, self)

    def from_int(self, value: int) -> FieldElement:
        coeffs = []
        for _ in range(self.n):
            value, c = divmod(value, self.p)
            coeffs.append(c)
        return FieldElement(tuple(coeffs), self)

    def zero(self) -> FieldElement:
        return FieldElement((0,) * self.n, self)

    def one(self) -> FieldElement:
        return FieldElement((1,) + (0,) * (self.n - 1), self)

    def basis(self, i: int) -> FieldElement:
        """The polynomial-basis element x^i, 0 <= i < n."""
        return FieldElement(tuple(int(j == i) for j in range(self.n)), self)

    def elements(self) -> list[FieldElement]:
        return [self.from_int(v) for v in range(self.order)]

    def polynomial_str(self) -> str:
        terms = []
        for i in range(self.n, -1, -1):
            c = self.irreducible[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            mono = "x" if i == 1 else f"x^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]
    field: FieldSpec

    def _other(self, other: FieldElement) -> FieldElement:
        if other.field != self.field:
            raise FieldMismatch("elements belong to different fields")
        return other

    def __add__(self, other: FieldElement) -> FieldElement:
        p = self.field.p
        o = self._other(other)
        return FieldElement(tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)), self.field)

    def __sub__(self, other: FieldElement) -> FieldElement:
        p = self.field.p
        o = self._other(other)
        return FieldElement(tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)), self.field)

    def __neg__(self) -> FieldElement:
        p = self.field.p
        return FieldElement(tuple(-a % p for a in self.coeffs), self.field)

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        f = self.field
        if isinstance(other, int):
            return FieldElement(tuple(a * other % f.p for a in self.coeffs), f)
        o = self._other(other)
        prod = [0] * (2 * f.n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        return FieldElement(tuple(_poly_mod(prod, f.irreducible, f.p)), f)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inv() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inv(self) -> FieldElement:
        if self.is_zero():
            raise FieldDivisionByZero("zero has no inverse")
        return self ** (self.field.order - 2)

    def frobenius(self) -> FieldElement:
        return self ** self.field.p

    def to_int(self) -> int:
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv(x: FieldElement) -> FieldElement:
    return x.inv()


def frobenius(x: FieldElement) -> FieldElement:
    return x.frobenius()


@lru_cache(maxsize=None)
def build_field(p: int, n: int) -> FieldSpec:
    """F_{p^n} modulo the smallest monic irreducible of degree ``n``.

    Candidates are ranked by the integer ``sum(c_i * p**i)`` of their
    coefficients, which orders by the highest differing coefficient first;
    for p=2, n=3 this picks x^3 + x + 1.

    Raises:
        CompositeModulusBase: if ``p`` is not prime.
        TooLarge: unless ``1 <= n <= 8`` and ``p**n <= 2**16``.
    """
    if not is_prime(p):
        raise CompositeModulusBase(f"p={p} is not prime")
    if not 1 <= n <= 8 or p**n > MAX_FIELD_SIZE:
        raise TooLarge(f"F_{p}^{n} is beyond the desk-scale limit")
    for poly in _monic_polys(p, n):
        if is_irreducible(poly, p):
            return FieldSpec(p, n, tuple(poly))
    raise AssertionError("every degree has an irreducible polynomial")


@dataclass(frozen=True)
class LinearizedPoly:
    """``sum_i a_i * x^(p^i)``; F_p-linear as a map on the field."""

    coeffs: tuple[FieldElement, ...]
    field: FieldSpec


def linearized_eval(f: LinearizedPoly, x: FieldElement) -> FieldElement:
    if x.field != f.field or any(a.field != f.field for a in f.coeffs):
        raise FieldMismatch("polynomial and argument live in different fields")
    out = f.field.zero()
    power = x
    for a in f.coeffs:
        out = out + a * power
        power = power.frobenius()
    return out


def element_to_column(x: FieldElement) -> MatZ:
    """Polynomial-basis coordinates of ``x`` as an n x 1 column over Z_p."""
    return MatZ(make_ring(x.field.p, 1), x.field.n, 1, x.coeffs)


def column_to_element(col: MatZ, field: FieldSpec) -> FieldElement:
    if col.shape != (field.n, 1) or col.ring.p != field.p or col.ring.s != 1:
        raise FieldMismatch(f"column {col.shape} over {col.ring} does not match F_{field.order}")
    return FieldElement(col.entries, field)


def gabidulin_code(p: int, m: int, n: int, d: int, max_size: int | None = MAX_CODE_SIZE):
    """Linear (m x n, d) Gabidulin MRD code over Z_p.

    Codewords are ``f(g_1), ..., f(g_m)`` written as coordinate rows, where
    ``f`` ranges over q-polynomials with ``m - d + 1`` coefficients and the
    evaluation points are the basis elements ``1, x, ..., x^(m-1)``. Words
    follow the lexicographic order of the coefficient tuples.

    Raises:
        BadParameters: unless ``2 <= d <= m <= n``.
        TooLarge: if the code would exceed ``max_size`` words.
    """
    from .codes import RankCode

    if not 2 <= d <= m <= n:
        raise BadParameters(f"need 2 <= d <= m <= n, got m={m}, n={n}, d={d}")
    k = m - d + 1
    size = p ** (n * k)
    if max_size is not None and size > max_size:
        raise TooLarge(f"Gabidulin code would have {size} words (limit {max_size})")
    field = build_field(p, n)
    ring = make_ring(p, 1)
    points = [field.basis(i) for i in range(m)]
    # images of each evaluation point under x -> x^(p^j)
    frob = []
    for g in points:
        powers = [g]
        for _ in range(k - 1):
            powers.append(powers[-1].frobenius())
        frob.append(powers)
    elements = field.elements()
    words = []
    for coeffs in itertools.product(elements, repeat=k):
        entries: list[int] = []
        for powers in frob:
            value = field.zero()
            for a, gp in zip(coeffs, powers):
                if not a.is_zero():
                    value = value + a * gp
            entries.extend(value.coeffs)
        words.append(MatZ(ring, m, n, tuple(entries)))
    return RankCode(ring, m, n, d, words, linear_verified=None, base_linear=True)
