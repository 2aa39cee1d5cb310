"""Equivalence canonical form over Z_{p^s} and the ranks read off from it.

Every m x n matrix factors as ``P @ diag(I_r, p^k_1, ..., p^k_t, 0) @ Q``
with ``P``, ``Q`` invertible and ``1 <= k_1 <= ... <= k_t <= s-1``. The
inner rank is ``r + t`` and the McCoy rank is ``r``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ShapeError, TooLarge
from .matrix import MatZ, block_diag, lift_entries
from .ring import RingSpec


@dataclass(frozen=True)
class CanonicalForm:
    P: MatZ
    Q: MatZ
    r: int
    ks: tuple[int, ...]
    P_inv: MatZ = field(repr=False, compare=False)
    Q_inv: MatZ = field(repr=False, compare=False)

    @property
    def t(self) -> int:
        return len(self.ks)

    @property
    def inner_rank(self) -> int:
        return self.r + len(self.ks)

    def diagonal(self) -> MatZ:
        """The middle factor ``diag(I_r, p^k_1, ..., p^k_t, 0)``."""
        ring = self.P.ring
        values = [1] * self.r + [ring.p**k for k in self.ks]
        return MatZ.diag(ring, values, self.P.m, self.Q.n)

    def reconstruct(self) -> MatZ:
        return self.P @ self.diagonal() @ self.Q


def _pivot(d: list[list[int]], k: int, p: int, s: int) -> tuple[int, int, int] | None:
    """Entry of least valuation in the trailing block, ties by (row, col)."""
    best = None
    for i in range(k, len(d)):
        row = d[i]
        for j in range(k, len(row)):
            e = row[j]
            if e == 0:
                continue
            v = 0
            while e % p == 0:
                e //= p
                v += 1
            if best is None or v < best[0]:
                best = (v, i, j)
                if v == 0:
                    return best
    return best


def _eliminate(a: MatZ, track: bool):
    """Diagonalise ``a`` by elementary operations.

    Returns the list of pivot valuations and, when ``track`` is set, the
    matrices ``P, P_inv, Q, Q_inv`` with ``a == P @ D @ Q``. Row operations
    E on D update ``P <- P E^-1`` and ``P_inv <- E P_inv``; column operations
    F update ``Q <- F^-1 Q`` and ``Q_inv <- Q_inv F``.
    """
    ring = a.ring
    p, s, q = ring.p, ring.s, ring.modulus
    m, n = a.m, a.n
    d = a.rows()
    if track:
        P = [[int(i == j) for j in range(m)] for i in range(m)]
        Pi = [[int(i == j) for j in range(m)] for i in range(m)]
        Q = [[int(i == j) for j in range(n)] for i in range(n)]
        Qi = [[int(i == j) for j in range(n)] for i in range(n)]
    vals: list[int] = []
    for k in range(min(m, n)):
        piv = _pivot(d, k, p, s)
        if piv is None:
            break
        v, i0, j0 = piv
        if i0 != k:
            d[k], d[i0] = d[i0], d[k]
            if track:
                for row in P:
                    row[k], row[i0] = row[i0], row[k]
                Pi[k], Pi[i0] = Pi[i0], Pi[k]
        if j0 != k:
            for row in d:
                row[k], row[j0] = row[j0], row[k]
            if track:
                Q[k], Q[j0] = Q[j0], Q[k]
                for row in Qi:
                    row[k], row[j0] = row[j0], row[k]
        pv = p**v
        u = d[k][k] // pv
        if u != 1:
            u_inv = pow(u, -1, q)
            d[k] = [e * u_inv % q for e in d[k]]
            if track:
                for row in P:
                    row[k] = row[k] * u % q
                Pi[k] = [e * u_inv % q for e in Pi[k]]
        pivot_row = d[k]
        for i in range(k + 1, m):
            if d[i][k] == 0:
                continue
            c = d[i][k] // pv
            d[i] = [(x - c * y) % q for x, y in zip(d[i], pivot_row)]
            if track:
                # row_i -= c row_k  =>  P col_k += c col_i ; Pi row_i -= c Pi row_k
                for row in P:
                    row[k] = (row[k] + c * row[i]) % q
                Pi[i] = [(x - c * y) % q for x, y in zip(Pi[i], Pi[k])]
        for j in range(k + 1, n):
            if pivot_row[j] == 0:
                continue
            c = pivot_row[j] // pv
            pivot_row[j] = 0
            if track:
                # col_j -= c col_k  =>  Q row_k += c Q row_j ; Qi col_j -= c Qi col_k
                Q[k] = [(x + c * y) % q for x, y in zip(Q[k], Q[j])]
                for row in Qi:
                    row[j] = (row[j] - c * row[k]) % q
        vals.append(v)
    if not track:
        return vals, None
    # valuations come out nondecreasing: each later pivot is drawn from
    # entries no smaller in valuation than the current one
    return vals, tuple(MatZ.from_rows(ring, x) for x in (P, Pi, Q, Qi))


def canonical_form(a: MatZ) -> CanonicalForm:
    """Factor ``a = P @ diag(I_r, p^k_1, ..., p^k_t, 0) @ Q``.

    Pivots are chosen by least p-adic valuation with ties broken by the
    lowest (row, column) position, so the output is deterministic.
    """
    vals, (P, Pi, Q, Qi) = _eliminate(a, track=True)
    r = sum(1 for v in vals if v == 0)
    return CanonicalForm(P=P, Q=Q, r=r, ks=tuple(v for v in vals if v > 0),
                         P_inv=Pi, Q_inv=Qi)


@lru_cache(maxsize=1 << 18)
def _invariants(ring: RingSpec, m: int, n: int, entries: tuple[int, ...]) -> tuple[int, int]:
    vals, _ = _eliminate(MatZ(ring, m, n, entries), track=False)
    return sum(1 for v in vals if v == 0), len(vals)


def rank_parameters(a: MatZ) -> tuple[int, tuple[int, ...]]:
    """``(r, ks)`` without building the transforms."""
    vals, _ = _eliminate(a, track=False)
    return sum(1 for v in vals if v == 0), tuple(v for v in vals if v > 0)


def inner_rank(a: MatZ) -> int:
    return _invariants(a.ring, a.m, a.n, a.entries)[1]


def mccoy_rank(a: MatZ) -> int:
    return _invariants(a.ring, a.m, a.n, a.entries)[0]


def rank_distance(a: MatZ, b: MatZ) -> int:
    return inner_rank(a - b)


def try_inverse(a: MatZ) -> MatZ | None:
    """Two-sided inverse of a square matrix, or ``None`` if it is singular."""
    if a.m != a.n:
        raise ShapeError(f"try_inverse needs a square matrix, got {a.shape}")
    cf = canonical_form(a)
    if cf.r != a.n:
        return None
    return cf.Q_inv @ cf.P_inv


def lift_canonical(a: MatZ) -> MatZ:
    """Lift ``a`` from Z_{p^(s-1)} to Z_{p^s} keeping its inner rank.

    The plain entry lift can raise the inner rank (over Z_2 the matrix
    ``[[1,1,0],[0,1,1],[1,0,1]]`` has rank 2, its lift to Z_4 has
    determinant 2 and inner rank 3). Lifting the factors of the canonical
    form instead gives ``P' D' Q'`` with ``P', Q'`` still invertible and
    ``D'`` carrying the same diagonal, so the invariants are unchanged while
    the result still reduces to ``a`` modulo ``p^(s-1)``.
    """
    cf = canonical_form(a)
    return lift_entries(cf.P) @ lift_entries(cf.diagonal()) @ lift_entries(cf.Q)


def has_right_inverse(a: MatZ) -> MatZ | None:
    """A right inverse ``X`` with ``a @ X == I_m``, or ``None``.

    Exists exactly when the McCoy rank equals ``m``. Only the wide case
    ``n >= m`` is accepted; transpose for left inverses.
    """
    if a.n < a.m:
        raise ShapeError(f"right inverse needs n >= m, got {a.shape}")
    cf = canonical_form(a)
    if cf.r != a.m:
        return None
    embed = MatZ.diag(a.ring, [1] * a.m, a.n, a.m)
    return cf.Q_inv @ embed @ cf.P_inv


def _span(vectors: list[tuple[int, ...]], q: int) -> set[tuple[int, ...]]:
    size = len(vectors[0])
    out = {(0,) * size}
    for vec in vectors:
        out = {tuple((x + c * y) % q for x, y in zip(base, vec))
               for base in out for c in range(q)}
    return out


def inner_rank_oracle(a: MatZ) -> int:
    """Least r with ``a = B @ C`` (B is m x r), by exhaustive search.

    Independent of :func:`canonical_form`; meant as a test oracle.

    Raises:
        TooLarge: unless ``m, n <= 3`` and ``p**s <= 9``.
    """
    q = a.ring.modulus
    if a.m > 3 or a.n > 3 or q > 9:
        raise TooLarge(f"oracle limited to 3x3 over rings of size <= 9, got {a.shape} over {a.ring}")
    if a.is_zero():
        return 0
    # a = B C  iff  a^T = C^T B^T, so enumerate on the shorter side
    if a.m > a.n:
        a = a.T
    cols = set(a.entries[j::a.n] for j in range(a.n))
    full = min(a.m, a.n)
    for r in range(1, full):
        for flat in itertools.product(range(q), repeat=a.m * r):
            basis = [flat[c * a.m:(c + 1) * a.m] for c in range(r)]
            if cols <= _span(basis, q):
                return r
    return full


# Witnesses W with W and I - W both invertible over any Z_p.
_PAIR = ((1, 1), (1, 0))
_TRIPLE = ((1, 1, 0), (1, 0, 1), (0, 1, 0))


def _identity_witness(ring: RingSpec, k: int) -> MatZ:
    if k % 2 == 0:
        h = k // 2
        rows = [[int(j == i) + int(j == i + h) for j in range(k)] for i in range(h)]
        rows += [[int(j == i) for j in range(k)] for i in range(h)]
        return MatZ.from_rows(ring, rows)
    if k == 3:
        return MatZ.from_rows(ring, _TRIPLE)
    return block_diag(MatZ.from_rows(ring, _TRIPLE), _identity_witness(ring, k - 3))


def find_invertible_complement(a: MatZ) -> MatZ:
    """Invertible ``B`` over Z_p such that ``a - B`` is also invertible.

    Reduces ``a`` to ``diag(I_r, 0)`` with its canonical form and builds a
    block witness there: the paired/triple identity witnesses on ``I_r`` and
    the identity on the zero block. A lone unit pivot (r = 1) is paired with
    a zero pivot through ``[[1, 1], [1, 0]]``.

    Raises:
        ShapeError: if ``a`` is not square with side at least 2 over a field.
    """
    if a.ring.s != 1:
        raise ShapeError("find_invertible_complement works over Z_p only")
    if a.m != a.n or a.m < 2:
        raise ShapeError(f"need a square matrix of side >= 2, got {a.shape}")
    ring, k = a.ring, a.m
    cf = canonical_form(a)
    r = cf.r
    if r == 0:
        middle = MatZ.identity(ring, k)
    elif r == 1:
        middle = MatZ.from_rows(ring, _PAIR)
        if k > 2:
            middle = block_diag(middle, MatZ.identity(ring, k - 2))
    else:
        middle = _identity_witness(ring, r)
        if k > r:
            middle = block_diag(middle, MatZ.identity(ring, k - r))
    b = cf.P @ middle @ cf.Q
    if try_inverse(b) is None or try_inverse(a - b) is None:
        return _search_complement(a)
    return b


def _search_complement(a: MatZ) -> MatZ:
    if a.m > 3:
        raise TooLarge("exhaustive complement search limited to k <= 3")
    from .matrix import all_matrices

    for b in all_matrices(a.ring, a.m, a.n):
        if try_inverse(b) is not None and try_inverse(a - b) is not None:
            return b
    raise ShapeError("no invertible complement exists")
