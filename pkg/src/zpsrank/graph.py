"""The generalized bilinear forms graph on m x n matrices over Z_{p^s}.

Two distinct matrices are adjacent when their difference has inner rank
below ``d``. The graph is a Cayley graph on the additive group, so most
facts about it are checked through translates of two sets: the "top rows"
clique ``M`` and an MRD code ``C``. Translates of ``M`` by the words of
``C`` tile the vertex set, and so do translates of ``C`` by ``M``; together
with the two witness sets these tilings pin down the independence number,
the clique number and both chromatic numbers exactly.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .canonical import canonical_form, inner_rank
from .codes import RankCode, is_linear_code, lift_mrd
from .errors import (
    BadParameters,
    DimensionMismatch,
    NotAClique,
    NotMaximum,
    TooLarge,
    UnclassifiableSet,
)
from .gf import gabidulin_code
from .matrix import MatZ, hstack, random_invertible, random_matrix
from .ring import RingSpec

MAX_EXPLICIT_VERTICES = 2**16
MAX_SET = 2**20
MAX_COVER = 2**22
MAX_BLOCK_PAIRS = 10**7


@dataclass(frozen=True)
class GammaSpec:
    ring: RingSpec
    m: int
    n: int
    d: int

    def __post_init__(self) -> None:
        if not 2 <= self.d <= min(self.m, self.n):
            raise BadParameters(f"need 2 <= d <= min(m, n), got m={self.m}, n={self.n}, d={self.d}")
        if self.n < self.m:
            raise BadParameters(f"n >= m by convention; transpose instead (m={self.m}, n={self.n})")

    @property
    def vertex_count(self) -> int:
        return self.ring.modulus ** (self.m * self.n)

    @property
    def alpha_value(self) -> int:
        return self.ring.p ** (self.ring.s * self.n * (self.m - self.d + 1))

    @property
    def omega_value(self) -> int:
        return self.ring.p ** (self.ring.s * self.n * (self.d - 1))

    def check(self, a: MatZ) -> None:
        if a.ring != self.ring or a.shape != (self.m, self.n):
            raise DimensionMismatch(f"{a.shape} over {a.ring} is not a vertex of {self}")

    def vertex(self, idx: int) -> MatZ:
        return MatZ.from_index(self.ring, self.m, self.n, idx)

    def zero(self) -> MatZ:
        return MatZ.zeros(self.ring, self.m, self.n)


def adjacent(a: MatZ, b: MatZ, spec: GammaSpec) -> bool:
    spec.check(a)
    spec.check(b)
    return a != b and inner_rank(a - b) < spec.d


# explicit graphs -----------------------------------------------------------

@dataclass
class ExplicitGraph:
    """Adjacency as one Python-int bitmask per vertex."""

    size: int
    masks: list[int]

    @classmethod
    def from_edges(cls, size: int, edges: Iterable[tuple[int, int]]) -> ExplicitGraph:
        masks = [0] * size
        for u, v in edges:
            if u != v:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
        return cls(size, masks)

    @classmethod
    def complete(cls, size: int) -> ExplicitGraph:
        full = (1 << size) - 1
        return cls(size, [full & ~(1 << v) for v in range(size)])

    @classmethod
    def empty(cls, size: int) -> ExplicitGraph:
        return cls(size, [0] * size)

    def neighbors(self, v: int) -> list[int]:
        mask, out = self.masks[v], []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out

    def degree(self, v: int) -> int:
        return bin(self.masks[v]).count("1")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    def complement(self) -> ExplicitGraph:
        full = (1 << self.size) - 1
        return ExplicitGraph(self.size, [full & ~m & ~(1 << v) for v, m in enumerate(self.masks)])

    def edges(self) -> Iterable[tuple[int, int]]:
        for u in range(self.size):
            for v in self.neighbors(u):
                if u < v:
                    yield u, v

    def edge_list_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())

    def is_connected(self) -> bool:
        if self.size == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            for w in self.neighbors(queue.popleft()):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.size


def _vertex_digits(spec: GammaSpec) -> np.ndarray:
    q, k = spec.ring.modulus, spec.m * spec.n
    idx = np.arange(spec.vertex_count, dtype=np.int64)
    digits = np.empty((spec.vertex_count, k), dtype=np.int64)
    for pos in range(k - 1, -1, -1):
        digits[:, pos] = idx % q
        idx //= q
    return digits


def build_explicit_graph(spec: GammaSpec, max_vertices: int | None = MAX_EXPLICIT_VERTICES) -> ExplicitGraph:
    """Materialise the graph with vertices in row-major index order.

    Raises:
        TooLarge: if there are more than ``max_vertices`` vertices.
    """
    count = spec.vertex_count
    if max_vertices is not None and count > max_vertices:
        raise TooLarge(f"{count} vertices exceed the explicit-graph limit {max_vertices}")
    q = spec.ring.modulus
    digits = _vertex_digits(spec)
    weights = q ** np.arange(spec.m * spec.n - 1, -1, -1, dtype=np.int64)
    # close[i]: the matrix with index i is a nonzero difference of rank < d
    close = np.zeros(count, dtype=bool)
    for i in range(1, count):
        close[i] = inner_rank(spec.vertex(i)) < spec.d
    masks = []
    for u in range(count):
        diff_idx = ((digits - digits[u]) % q) @ weights
        nbrs = np.flatnonzero(close[diff_idx])
        mask = 0
        for v in nbrs.tolist():
            mask |= 1 << v
        masks.append(mask)
    return ExplicitGraph(count, masks)


def is_connected(spec: GammaSpec, max_vertices: int | None = MAX_EXPLICIT_VERTICES) -> bool:
    """Breadth-first search over the explicit graph."""
    return build_explicit_graph(spec, max_vertices).is_connected()


def path_between(a: MatZ, b: MatZ, spec: GammaSpec) -> list[MatZ]:
    """A walk from ``a`` to ``b`` built from the canonical form of ``b - a``.

    Writing ``b - a = P diag(p^k_1, ..., p^k_r, 0) Q``, the walk adds the
    diagonal terms ``d - 1`` at a time, so each step has inner rank below
    ``d`` and there are at most ``ceil(r / (d - 1))`` steps.
    """
    spec.check(a)
    spec.check(b)
    cf = canonical_form(b - a)
    p = spec.ring.p
    values = [1] * cf.r + [p**k for k in cf.ks]
    path = [a]
    for stop in range(spec.d - 1, len(values) + spec.d - 1, spec.d - 1):
        stop = min(stop, len(values))
        partial = MatZ.diag(spec.ring, values[:stop], spec.m, spec.n)
        path.append(a + cf.P @ partial @ cf.Q)
    assert path[-1] == b
    return path


def verify_translation_automorphism(spec: GammaSpec, a: MatZ, sample: int | None = 1000,
                                    seed: int = 0,
                                    mapping: Callable[[MatZ], MatZ] | None = None) -> bool:
    """Check that ``x -> x - a`` (or ``mapping``) preserves adjacency.

    ``sample=None`` checks every vertex pair; otherwise ``sample`` random
    pairs, half of them drawn as adjacent pairs so both sides of the
    equivalence get exercised.
    """
    spec.check(a)
    f = mapping if mapping is not None else (lambda x: x - a)
    if sample is None:
        vertices = [spec.vertex(i) for i in range(spec.vertex_count)]
        images = [f(x) for x in vertices]
        for i, j in itertools.combinations(range(len(vertices)), 2):
            if adjacent(vertices[i], vertices[j], spec) != adjacent(images[i], images[j], spec):
                return False
        return True
    rng = random.Random(seed)
    for k in range(sample):
        x = random_matrix(spec.ring, spec.m, spec.n, rng)
        if k % 2:
            y = x + _random_low_rank(spec, rng)
        else:
            y = random_matrix(spec.ring, spec.m, spec.n, rng)
        if adjacent(x, y, spec) != adjacent(f(x), f(y), spec):
            return False
    return True


def _random_low_rank(spec: GammaSpec, rng: random.Random) -> MatZ:
    left = random_matrix(spec.ring, spec.m, spec.d - 1, rng)
    right = random_matrix(spec.ring, spec.d - 1, spec.n, rng)
    return left @ right


# the two tiles -------------------------------------------------------------

def canonical_max_clique(spec: GammaSpec, max_size: int | None = MAX_SET) -> list[MatZ]:
    """All matrices whose last ``m - d + 1`` rows vanish, in index order."""
    size = spec.omega_value
    if max_size is not None and size > max_size:
        raise TooLarge(f"clique of {size} matrices exceeds the limit {max_size}")
    q, top = spec.ring.modulus, (spec.d - 1) * spec.n
    pad = (0,) * ((spec.m - spec.d + 1) * spec.n)
    return [MatZ(spec.ring, spec.m, spec.n, head + pad)
            for head in itertools.product(range(q), repeat=top)]


def mrd_code(spec: GammaSpec, max_size: int | None = MAX_SET) -> RankCode:
    """Linear MRD code for ``spec``: a Gabidulin code lifted to Z_{p^s}."""
    if max_size is not None and spec.alpha_value > max_size:
        raise TooLarge(f"code of {spec.alpha_value} words exceeds the limit {max_size}")
    base = gabidulin_code(spec.ring.p, spec.m, spec.n, spec.d, max_size=max_size)
    is_linear_code(base)
    return lift_mrd(base, spec.ring.s, max_size=max_size)


# certificates --------------------------------------------------------------

def _all_pairs(words: Sequence[MatZ], test: Callable[[int], bool]) -> bool:
    return all(test(inner_rank(a - b)) for i, a in enumerate(words) for b in words[i + 1:])


def is_clique(words: Sequence[MatZ], spec: GammaSpec) -> bool:
    if len({w.entries for w in words}) != len(words):
        return False
    return _all_pairs(words, lambda r: r < spec.d)


def is_independent(words: Sequence[MatZ], spec: GammaSpec) -> bool:
    if len({w.entries for w in words}) != len(words):
        return False
    return _all_pairs(words, lambda r: r >= spec.d)


@dataclass
class InvariantCertificate:
    """A checkable proof of one graph invariant.

    ``witness`` gives the lower bound. The upper bound comes from the
    partition ``{base + offset : offset in offsets}``, whose blocks are
    cliques (for ``alpha`` and ``chi_complement``) or independent sets (for
    ``omega`` and ``chi``) and tile the vertex set.
    """

    kind: str
    spec: GammaSpec
    claimed_value: int
    witness: list[MatZ]
    partition_base: list[MatZ]
    partition_offsets: list[MatZ]
    partition_base_name: str
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def checks_passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def blocks(self) -> Iterable[list[MatZ]]:
        for off in self.partition_offsets:
            yield [x + off for x in self.partition_base]

    def to_dict(self, witness_file: str | None = None) -> dict:
        spec = self.spec
        return {
            "kind": self.kind,
            "claimed_value": self.claimed_value,
            "spec": {"p": spec.ring.p, "s": spec.ring.s, "m": spec.m, "n": spec.n, "d": spec.d},
            "witness_file": witness_file,
            "witness_size": len(self.witness),
            "partition_description": {
                "base": self.partition_base_name,
                "base_size": len(self.partition_base),
                "blocks": len(self.partition_offsets),
                "offsets": "witness" if self.partition_offsets is self.witness else "other tile",
            },
            "checks": dict(sorted(self.checks.items())),
            "checks_passed": self.checks_passed,
        }


def _tiling_checks(spec: GammaSpec, base: list[MatZ], offsets: list[MatZ],
                   block_test: Callable[[int], bool]) -> dict[str, bool]:
    checks: dict[str, bool] = {}
    total = len(base) * len(offsets)
    if total > MAX_COVER:
        raise TooLarge(f"cover of {total} vertices exceeds the limit {MAX_COVER}")
    checks["cover_count"] = total == spec.vertex_count
    seen = bytearray(spec.vertex_count) if spec.vertex_count <= MAX_COVER else None
    disjoint = seen is not None
    if seen is not None:
        for off in offsets:
            for x in base:
                idx = (x + off).to_index()
                if seen[idx]:
                    disjoint = False
                seen[idx] = 1
    checks["cover_disjoint"] = disjoint
    checks["base_block"] = _all_pairs(base, block_test)
    pairs = len(base) * (len(base) - 1) // 2 * len(offsets)
    if pairs <= MAX_BLOCK_PAIRS:
        checks["every_block"] = all(_all_pairs([x + off for x in base], block_test)
                                    for off in offsets)
    return checks


def _guard_certificate(spec: GammaSpec, max_size: int | None) -> None:
    """Fail fast, before any set is materialised."""
    if max_size is not None:
        biggest = max(spec.alpha_value, spec.omega_value)
        if biggest > max_size:
            raise TooLarge(f"a tile of {biggest} matrices exceeds the limit {max_size}")
    if spec.vertex_count > MAX_COVER:
        raise TooLarge(f"cover of {spec.vertex_count} vertices exceeds the limit {MAX_COVER}")


def alpha_certificate(spec: GammaSpec, max_size: int | None = MAX_SET) -> InvariantCertificate:
    """Independence number: MRD code below, tiling by clique translates above."""
    _guard_certificate(spec, max_size)
    code = list(mrd_code(spec, max_size).words)
    clique = canonical_max_clique(spec, max_size)
    checks = {"witness_independent": is_independent(code, spec)}
    checks.update(_tiling_checks(spec, clique, code, lambda r: r < spec.d))
    return InvariantCertificate("alpha", spec, len(code), code, clique, code,
                                "canonical_clique", checks)


def omega_certificate(spec: GammaSpec, max_size: int | None = MAX_SET,
                      kind: str = "omega") -> InvariantCertificate:
    """Clique number, and with it the chromatic number.

    The translates of the MRD code by the clique members form a proper
    colouring with as many colours as the clique has vertices.
    """
    if kind not in ("omega", "chi"):
        raise ValueError(f"kind must be 'omega' or 'chi', got {kind!r}")
    _guard_certificate(spec, max_size)
    clique = canonical_max_clique(spec, max_size)
    code = list(mrd_code(spec, max_size).words)
    checks = {"witness_clique": is_clique(clique, spec)}
    checks.update(_tiling_checks(spec, code, clique, lambda r: r >= spec.d))
    return InvariantCertificate(kind, spec, len(clique), clique, code, clique,
                                "mrd_code", checks)


def chi_certificate(spec: GammaSpec, max_size: int | None = MAX_SET) -> InvariantCertificate:
    return omega_certificate(spec, max_size, kind="chi")


def complement_chi_certificate(spec: GammaSpec, max_size: int | None = MAX_SET) -> InvariantCertificate:
    """Chromatic number of the complement graph.

    Colour classes are the clique translates ``M + S``; two vertices of one
    class are adjacent in the graph, hence never adjacent in the complement.
    The MRD code is a clique of the complement of the same size.
    """
    _guard_certificate(spec, max_size)
    code = list(mrd_code(spec, max_size).words)
    clique = canonical_max_clique(spec, max_size)
    checks = {"witness_complement_clique": is_independent(code, spec)}
    checks.update(_tiling_checks(spec, clique, code, lambda r: r < spec.d))
    return InvariantCertificate("chi_complement", spec, len(code), code, clique, code,
                                "canonical_clique", checks)


CERTIFICATES = {
    "alpha": alpha_certificate,
    "omega": omega_certificate,
    "chi": chi_certificate,
    "chi_complement": complement_chi_certificate,
}


def certificate_coloring(cert: InvariantCertificate) -> dict[int, int]:
    """Vertex index -> colour (block number) for a tiling certificate."""
    return {x.to_index(): c for c, block in enumerate(cert.blocks()) for x in block}


# exact search --------------------------------------------------------------

def _max_clique(masks: list[int], candidates: int) -> int:
    """Branch and bound with greedy colouring bounds on bitsets."""
    best = 0

    def colour_order(pool: int) -> list[tuple[int, int]]:
        order, colour = [], 0
        uncoloured = pool
        while uncoloured:
            colour += 1
            avail = uncoloured
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~masks[v] & ~low
                uncoloured &= ~low
                order.append((v, colour))
        return order

    def expand(size: int, pool: int) -> None:
        nonlocal best
        if not pool:
            best = max(best, size)
            return
        for v, bound in reversed(colour_order(pool)):
            if size + bound <= best:
                return
            expand(size + 1, pool & masks[v])
            pool &= ~(1 << v)

    expand(0, candidates)
    return best


def brute_alpha_omega(graph: ExplicitGraph) -> tuple[int, int]:
    """Exact independence and clique numbers of a small graph.

    Raises:
        TooLarge: above 64 vertices (independence) or 512 (clique).
    """
    if graph.size > 64:
        raise TooLarge(f"exact independent-set search limited to 64 vertices, got {graph.size}")
    everything = (1 << graph.size) - 1
    omega = _max_clique(graph.masks, everything)
    alpha = _max_clique(graph.complement().masks, everything)
    return alpha, omega


def brute_omega(graph: ExplicitGraph) -> int:
    if graph.size > 512:
        raise TooLarge(f"exact clique search limited to 512 vertices, got {graph.size}")
    return _max_clique(graph.masks, (1 << graph.size) - 1)


# maximum-clique classification --------------------------------------------

@dataclass(frozen=True)
class CliqueForm:
    """``P (X; 0) + B`` (orientation ``"row"``) or ``(Y, 0) Q + B`` (``"column"``)."""

    orientation: str
    transform: MatZ
    offset: MatZ

    def members(self, spec: GammaSpec) -> list[MatZ]:
        q = spec.ring.modulus
        k = spec.d - 1
        out = []
        for free in itertools.product(range(q), repeat=k * spec.n):
            if self.orientation == "row":
                core = MatZ(spec.ring, spec.m, spec.n, free + (0,) * ((spec.m - k) * spec.n))
                out.append(self.transform @ core + self.offset)
            else:
                rows = [list(free[i * k:(i + 1) * k]) + [0] * (spec.n - k) for i in range(spec.m)]
                out.append(MatZ.from_rows(spec.ring, rows) @ self.transform + self.offset)
        return out

    def to_dict(self) -> dict:
        return {"orientation": self.orientation, "transform": self.transform.rows(),
                "offset": self.offset.rows()}


def _row_form(translated: list[MatZ], k: int) -> tuple[MatZ, MatZ] | None:
    """``(P, P^-1)`` if every matrix has its columns in a rank-k free summand."""
    cf = canonical_form(hstack(translated))
    if cf.r != k or cf.ks:
        return None
    top = k * translated[0].n
    for x in translated:
        if any((cf.P_inv @ x).entries[top:]):
            return None
    return cf.P, cf.P_inv


def classify_max_clique(words: Iterable[MatZ], spec: GammaSpec) -> CliqueForm:
    """Identify which of the two maximum-clique shapes ``words`` has.

    The clique is translated to contain 0 and all members are placed side
    by side; the canonical form of that wide matrix exposes a rank ``d - 1``
    free column space for the row shape. The column shape is tried on
    transposes when ``m == n``. The returned form reproduces the input set.

    Raises:
        NotMaximum: if the set does not have ``p^(sn(d-1))`` elements.
        NotAClique: if two members are not adjacent.
        UnclassifiableSet: if neither shape reconstructs the set.
    """
    words = sorted({w.entries: w for w in words}.values(), key=lambda w: w.entries)
    for w in words:
        spec.check(w)
    if len(words) != spec.omega_value:
        raise NotMaximum(f"{len(words)} matrices, a maximum clique has {spec.omega_value}")
    if not is_clique(words, spec):
        raise NotAClique("the set contains a non-adjacent pair")
    offset = words[0]
    translated = [w - offset for w in words]
    k = spec.d - 1
    found = _row_form(translated, k)
    if found is not None:
        return CliqueForm("row", found[0], offset)
    if spec.m == spec.n:
        found = _row_form([x.T for x in translated], k)
        if found is not None:
            return CliqueForm("column", found[0].T, offset)
    raise UnclassifiableSet("the clique matches neither maximum-clique shape")


def random_row_clique(spec: GammaSpec, seed: int | random.Random) -> tuple[list[MatZ], MatZ, MatZ]:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    P = random_invertible(spec.ring, spec.m, rng)
    B = random_matrix(spec.ring, spec.m, spec.n, rng)
    return CliqueForm("row", P, B).members(spec), P, B


def random_column_clique(spec: GammaSpec, seed: int | random.Random) -> tuple[list[MatZ], MatZ, MatZ]:
    if spec.m != spec.n:
        raise BadParameters("column-shaped maximum cliques need m == n")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    Q = random_invertible(spec.ring, spec.n, rng)
    B = random_matrix(spec.ring, spec.m, spec.n, rng)
    return CliqueForm("column", Q, B).members(spec), Q, B


def same_set(a: Iterable[MatZ], b: Iterable[MatZ]) -> bool:
    return {x.entries for x in a} == {x.entries for x in b}
