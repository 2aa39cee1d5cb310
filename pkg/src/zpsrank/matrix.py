"""Dense matrices over Z_{p^s}: the container, arithmetic, reduction mod p,
lifting between rings, random generation and the JSON matrix format."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, ParseError, RingMismatch
from .ring import Residue, RingSpec, make_ring


@dataclass(frozen=True)
class MatZ:
    """An m x n matrix over ``ring`` stored as a flat row-major tuple of ints.

    Every entry is a least nonnegative representative. Instances are
    immutable and hashable, so they can live in sets (codes, cliques).
    """

    ring: RingSpec
    m: int
    n: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise DimensionMismatch(f"bad shape {self.m}x{self.n}")
        if len(self.entries) != self.m * self.n:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.m}x{self.n} matrix"
            )
        q = self.ring.modulus
        if any(not 0 <= e < q for e in self.entries):
            object.__setattr__(self, "entries", tuple(e % q for e in self.entries))

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, ring: RingSpec, rows: Sequence[Sequence[int]]) -> MatZ:
        m = len(rows)
        n = len(rows[0]) if m else 0
        if any(len(row) != n for row in rows):
            raise DimensionMismatch("ragged rows")
        return cls(ring, m, n, tuple(int(e) for row in rows for e in row))

    @classmethod
    def zeros(cls, ring: RingSpec, m: int, n: int) -> MatZ:
        return cls(ring, m, n, (0,) * (m * n))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> MatZ:
        return cls(ring, n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, ring: RingSpec, values: Sequence[int], m: int | None = None,
             n: int | None = None) -> MatZ:
        m = len(values) if m is None else m
        n = m if n is None else n
        entries = [0] * (m * n)
        for i, v in enumerate(values):
            entries[i * n + i] = v
        return cls(ring, m, n, tuple(entries))

    # access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.n + j]

    def residue(self, i: int, j: int) -> Residue:
        return Residue(self[i, j], self.ring)

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(self.m)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.n:(i + 1) * self.n]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self) -> str:
        return f"MatZ({self.ring!r}, {self.rows()})"

    # arithmetic ---------------------------------------------------------

    def _check_same(self, other: MatZ) -> None:
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.shape != self.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: MatZ) -> MatZ:
        self._check_same(other)
        q = self.ring.modulus
        return MatZ(self.ring, self.m, self.n,
                    tuple((a + b) % q for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: MatZ) -> MatZ:
        self._check_same(other)
        q = self.ring.modulus
        return MatZ(self.ring, self.m, self.n,
                    tuple((a - b) % q for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> MatZ:
        q = self.ring.modulus
        return MatZ(self.ring, self.m, self.n, tuple(-a % q for a in self.entries))

    def __matmul__(self, other: MatZ) -> MatZ:
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.n != other.m:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        q = self.ring.modulus
        cols = [other.entries[j::other.n] for j in range(other.n)]
        out = []
        for i in range(self.m):
            row = self.entries[i * self.n:(i + 1) * self.n]
            for col in cols:
                out.append(sum(a * b for a, b in zip(row, col)) % q)
        return MatZ(self.ring, self.m, other.n, tuple(out))

    def scale(self, c: int | Residue) -> MatZ:
        c = int(c)
        q = self.ring.modulus
        return MatZ(self.ring, self.m, self.n, tuple(c * a % q for a in self.entries))

    @property
    def T(self) -> MatZ:
        return MatZ(self.ring, self.n, self.m,
                    tuple(self.entries[i * self.n + j]
                          for j in range(self.n) for i in range(self.m)))

    def to_index(self) -> int:
        """Row-major base-p^s index of this matrix, used as a vertex id."""
        q = self.ring.modulus
        idx = 0
        for e in self.entries:
            idx = idx * q + e
        return idx

    @classmethod
    def from_index(cls, ring: RingSpec, m: int, n: int, idx: int) -> MatZ:
        q = ring.modulus
        out = [0] * (m * n)
        for k in range(m * n - 1, -1, -1):
            idx, out[k] = divmod(idx, q)
        return cls(ring, m, n, tuple(out))


# free-function spellings of the arithmetic --------------------------------

def add(a: MatZ, b: MatZ) -> MatZ:
    return a + b


def sub(a: MatZ, b: MatZ) -> MatZ:
    return a - b


def neg(a: MatZ) -> MatZ:
    return -a


def mul(a: MatZ, b: MatZ) -> MatZ:
    return a @ b


def transpose(a: MatZ) -> MatZ:
    return a.T


def scalar_mul(c: int | Residue, a: MatZ) -> MatZ:
    return a.scale(c)


def block_diag(a: MatZ, b: MatZ) -> MatZ:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    m, n = a.m + b.m, a.n + b.n
    entries = [0] * (m * n)
    for i in range(a.m):
        for j in range(a.n):
            entries[i * n + j] = a[i, j]
    for i in range(b.m):
        for j in range(b.n):
            entries[(a.m + i) * n + a.n + j] = b[i, j]
    return MatZ(a.ring, m, n, tuple(entries))


def hstack(mats: Sequence[MatZ]) -> MatZ:
    """Place matrices with equal row count side by side."""
    first = mats[0]
    rows: list[list[int]] = [[] for _ in range(first.m)]
    for mat in mats:
        if mat.m != first.m:
            raise DimensionMismatch("hstack needs equal row counts")
        if mat.ring != first.ring:
            raise RingMismatch(f"{first.ring} vs {mat.ring}")
        for i in range(mat.m):
            rows[i].extend(mat.row(i))
    return MatZ.from_rows(first.ring, rows)


def all_matrices(ring: RingSpec, m: int, n: int) -> Iterator[MatZ]:
    """Every m x n matrix over ``ring`` in increasing index order."""
    for idx in range(ring.modulus ** (m * n)):
        yield MatZ.from_index(ring, m, n, idx)


# reduction and lifting ----------------------------------------------------

def reduce_mod_p(x: MatZ) -> MatZ:
    """The natural surjection onto Z_p: keep the lowest p-adic digit."""
    p = x.ring.p
    return MatZ(make_ring(p, 1), x.m, x.n, tuple(e % p for e in x.entries))


def lift_entries(a: MatZ, target: RingSpec | None = None) -> MatZ:
    """View a matrix over Z_{p^(s-1)} as one over Z_{p^s} (values unchanged)."""
    target = make_ring(a.ring.p, a.ring.s + 1) if target is None else target
    if target.p != a.ring.p or target.s < a.ring.s:
        raise RingMismatch(f"cannot lift {a.ring} into {target}")
    return MatZ(target, a.m, a.n, a.entries)


def lift_times_p(a: MatZ, target: RingSpec | None = None) -> MatZ:
    """``lift_entries(a) * p`` over Z_{p^(s+1)} (or the given target)."""
    lifted = lift_entries(a, target)
    return lifted.scale(lifted.ring.p)


# randomness ---------------------------------------------------------------

def random_matrix(ring: RingSpec, m: int, n: int, seed: int | random.Random) -> MatZ:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    q = ring.modulus
    return MatZ(ring, m, n, tuple(rng.randrange(q) for _ in range(m * n)))


def random_radical_matrix(ring: RingSpec, m: int, n: int,
                          seed: int | random.Random) -> MatZ:
    """Random matrix with every entry divisible by p."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    p, q = ring.p, ring.modulus
    return MatZ(ring, m, n, tuple(p * rng.randrange(q // p) % q for _ in range(m * n)))


def random_invertible(ring: RingSpec, n: int, seed: int | random.Random) -> MatZ:
    """Rejection-sample a matrix whose reduction mod p is nonsingular."""
    from .canonical import try_inverse

    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    while True:
        a = random_matrix(ring, n, n, rng)
        if try_inverse(a) is not None:
            return a


# JSON matrix format -------------------------------------------------------

def matrix_to_dict(a: MatZ) -> dict:
    return {"p": a.ring.p, "s": a.ring.s, "m": a.m, "n": a.n, "entries": a.rows()}


def _require_int(obj: dict, key: str, where: str) -> int:
    if key not in obj:
        raise ParseError(f"{where}: missing field '{key}'")
    value = obj[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f"{where}: field '{key}' must be an integer, got {value!r}")
    return value


def parse_rows(rows: object, ring: RingSpec, m: int, n: int, where: str) -> MatZ:
    """Validate a nested list of entries and build the matrix."""
    if not isinstance(rows, list) or len(rows) != m:
        raise ParseError(f"{where}: expected {m} rows")
    q = ring.modulus
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{where}[{i}]: expected {n} entries")
        for j, e in enumerate(row):
            if not isinstance(e, int) or isinstance(e, bool):
                raise ParseError(f"{where}[{i}][{j}]: entry {e!r} is not an integer")
            if not 0 <= e < q:
                raise ParseError(f"{where}[{i}][{j}]: entry {e} not in [0, {q})")
    return MatZ.from_rows(ring, rows)


def ring_from_header(obj: dict, where: str) -> RingSpec:
    p = _require_int(obj, "p", where)
    s = _require_int(obj, "s", where)
    try:
        return make_ring(p, s)
    except (ValueError, OverflowError) as exc:
        raise ParseError(f"{where}: invalid ring p={p}, s={s}: {exc}") from exc


def matrix_from_dict(obj: object, where: str = "matrix") -> MatZ:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected a JSON object")
    ring = ring_from_header(obj, where)
    m = _require_int(obj, "m", where)
    n = _require_int(obj, "n", where)
    if m < 1 or n < 1:
        raise ParseError(f"{where}: bad shape {m}x{n}")
    if "entries" not in obj:
        raise ParseError(f"{where}: missing field 'entries'")
    return parse_rows(obj["entries"], ring, m, n, f"{where}.entries")


def loads_json(text: str, source: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_matrix(path: str) -> MatZ:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_dict(loads_json(fh.read(), path))


def dump_matrix(a: MatZ) -> str:
    return json.dumps(matrix_to_dict(a), sort_keys=True)


def save_matrix(a: MatZ, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_matrix(a) + "\n")


def unique_sorted(mats: Iterable[MatZ]) -> list[MatZ]:
    """Deduplicate and sort lexicographically by row-major entries."""
    return sorted(set(mats), key=lambda a: a.entries)
