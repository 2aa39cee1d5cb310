"""Scalar arithmetic in the residue ring Z/p^sZ.

Elements are kept as least nonnegative representatives, so equality of
residues is plain integer comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import (
    CompositeModulusBase,
    DigitOutOfRange,
    RingMismatch,
    RingOverflow,
    WrongLength,
    ZeroInput,
)

INT64_MAX = 2**63 - 1


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """The ring Z_{p^s}. Build through :func:`make_ring` to get validation."""

    p: int
    s: int
    modulus: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if self.p < 2 or not is_prime(self.p):
            raise CompositeModulusBase(f"p={self.p} is not prime")
        if self.s < 1:
            raise ValueError(f"exponent s must be >= 1, got {self.s}")
        modulus = self.p**self.s
        if modulus > INT64_MAX:
            raise RingOverflow(f"{self.p}^{self.s} exceeds the 64-bit range")
        object.__setattr__(self, "modulus", modulus)

    def __repr__(self) -> str:
        return f"Z_{self.modulus}"

    def __call__(self, value: int) -> Residue:
        return Residue(value % self.modulus, self)

    @property
    def residue_field(self) -> RingSpec:
        return make_ring(self.p, 1)

    def elements(self) -> list[Residue]:
        return [Residue(v, self) for v in range(self.modulus)]

    def unit_count(self) -> int:
        return (self.p - 1) * self.p ** (self.s - 1)

    def radical_count(self) -> int:
        return self.p ** (self.s - 1)

    def valuation(self, value: int) -> int:
        """p-adic valuation of a representative; ``s`` for zero."""
        value %= self.modulus
        if value == 0:
            return self.s
        t = 0
        while value % self.p == 0:
            value //= self.p
            t += 1
        return t

    def inverse(self, value: int) -> int:
        """Inverse of a unit given as an integer representative."""
        return pow(value, -1, self.modulus)


@lru_cache(maxsize=None)
def make_ring(p: int, s: int) -> RingSpec:
    """Return the (cached) ring Z_{p^s}.

    Raises:
        CompositeModulusBase: if ``p`` is not prime.
        RingOverflow: if ``p**s`` exceeds a signed 64-bit integer.
    """
    return RingSpec(p, s)


@dataclass(frozen=True)
class Residue:
    value: int
    ring: RingSpec

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.ring.modulus:
            object.__setattr__(self, "value", self.value % self.ring.modulus)

    def _coerce(self, other: Residue | int) -> int:
        if isinstance(other, Residue):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other.value
        return other

    def __add__(self, other: Residue | int) -> Residue:
        return self.ring(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Residue | int) -> Residue:
        return self.ring(self.value - self._coerce(other))

    def __rsub__(self, other: int) -> Residue:
        return self.ring(other - self.value)

    def __mul__(self, other: Residue | int) -> Residue:
        return self.ring(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> Residue:
        return self.ring(-self.value)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.ring.modulus})"


def is_unit(x: Residue) -> bool:
    return x.value % x.ring.p != 0


def is_in_radical(x: Residue) -> bool:
    """Membership in the maximal ideal (p)."""
    return x.value % x.ring.p == 0


def unit_decompose(x: Residue) -> tuple[Residue, int]:
    """Write a nonzero ``x`` as ``u * p**t`` with ``u`` a unit.

    ``t`` is the p-adic valuation of the representative. ``u`` is only
    determined modulo ``p**(s - t)``; we return the integer quotient
    ``x.value // p**t``, which is already reduced.

    Raises:
        ZeroInput: if ``x`` is zero.
    """
    if x.value == 0:
        raise ZeroInput("zero has no unit decomposition")
    t = x.ring.valuation(x.value)
    return Residue(x.value // x.ring.p**t, x.ring), t


def padic_digits(x: Residue) -> list[int]:
    """Base-p digits ``[t_0, ..., t_{s-1}]`` of ``x``, least significant first."""
    p = x.ring.p
    value = x.value
    digits = []
    for _ in range(x.ring.s):
        value, digit = divmod(value, p)
        digits.append(digit)
    return digits


def digits_compose(digits: Sequence[int], ring: RingSpec) -> Residue:
    """Inverse of :func:`padic_digits`."""
    if len(digits) != ring.s:
        raise WrongLength(f"expected {ring.s} digits, got {len(digits)}")
    value = 0
    for i, digit in enumerate(digits):
        if not 0 <= digit < ring.p:
            raise DigitOutOfRange(f"digit {i} = {digit} not in [0, {ring.p})")
        value += digit * ring.p**i
    return Residue(value, ring)
