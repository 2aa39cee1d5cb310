"""Rank-distance codes over Z_{p^s}.

Holds the code container, the p-adic lifting of an MRD code over Z_p to
Z_{p^s} (``A_s = A_1 + p * A_{s-1}``), the MRD / linearity / MDS verifiers
and the JSON code file format.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .canonical import inner_rank
from .errors import (
    BaseNotMRD,
    DimensionMismatch,
    DuplicateWord,
    MissingZero,
    ParseError,
    RingMismatch,
    TooFewWords,
    TooLarge,
)
from .matrix import MatZ, lift_entries, lift_times_p, loads_json, parse_rows, ring_from_header
from .ring import RingSpec, make_ring

MAX_CODE_SIZE = 2**20
MAX_PAIRS = 10**7


def default_workers() -> int:
    """Worker count for pairwise scans, capped by ``ZPS_RANK_THREADS``."""
    try:
        return max(1, int(os.environ.get("ZPS_RANK_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class RankCode:
    """A set of m x n matrices over one ring with a declared design distance.

    ``words`` is kept deduplicated-checked and sorted by row-major entries.
    ``linear_verified`` is ``None`` until :func:`is_linear_code` has run.
    ``base_linear`` records whether the code was built from a linear base.
    """

    ring: RingSpec
    m: int
    n: int
    d: int
    words: Sequence[MatZ]
    linear_verified: bool | None = None
    base_linear: bool | None = None
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        words = sorted(self.words, key=lambda w: w.entries)
        for a, b in zip(words, words[1:]):
            if a.entries == b.entries:
                raise DuplicateWord(f"duplicate word {a.rows()}")
        for w in words:
            if w.ring != self.ring:
                raise RingMismatch(f"word over {w.ring} in a code over {self.ring}")
            if w.shape != (self.m, self.n):
                raise DimensionMismatch(f"word of shape {w.shape} in an {self.m}x{self.n} code")
        self.words = tuple(words)
        self._index = frozenset(w.entries for w in words)

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, word: MatZ) -> bool:
        return word.ring == self.ring and word.entries in self._index

    def mrd_size(self) -> int:
        """Cardinality an MRD code with these parameters must have."""
        return self.ring.p ** (self.ring.s * self.n * (self.m - self.d + 1))

    def translate(self, offset: MatZ) -> RankCode:
        return RankCode(self.ring, self.m, self.n, self.d, [w + offset for w in self.words])


def _pairwise_min_rank(args) -> int | None:
    words, start, stop = args
    best = None
    for i in range(start, stop):
        a = words[i]
        for b in words[i + 1:]:
            r = inner_rank(a - b)
            if best is None or r < best:
                best = r
    return best


def min_rank_distance(code: RankCode, workers: int | None = None) -> int:
    """Least rank distance between two distinct words.

    With ``linear_verified`` set this is the least inner rank of a nonzero
    word, since rank distance is translation invariant.

    Raises:
        TooFewWords: for codes with fewer than two words.
        TooLarge: if the pair count exceeds the scan limit.
    """
    words = code.words
    if len(words) < 2:
        raise TooFewWords("minimum distance needs at least two words")
    if code.linear_verified:
        return min(inner_rank(w) for w in words if not w.is_zero())
    pairs = len(words) * (len(words) - 1) // 2
    if pairs > MAX_PAIRS:
        raise TooLarge(f"{pairs} pairs exceed the scan limit {MAX_PAIRS}")
    workers = default_workers() if workers is None else workers
    if workers <= 1 or pairs < 20000:
        return _pairwise_min_rank((words, 0, len(words)))
    # split rows so each chunk covers a similar number of pairs
    bounds, target, acc, start = [], pairs // workers + 1, 0, 0
    for i in range(len(words)):
        acc += len(words) - 1 - i
        if acc >= target:
            bounds.append((start, i + 1))
            start, acc = i + 1, 0
    if start < len(words):
        bounds.append((start, len(words)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = pool.map(_pairwise_min_rank, [(words, a, b) for a, b in bounds])
        return min(r for r in results if r is not None)


@dataclass(frozen=True)
class MRDReport:
    is_mrd: bool
    size: int
    expected_size: int
    min_distance: int | None
    distance_ok: bool
    size_ok: bool


def verify_mrd(code: RankCode) -> MRDReport:
    """MRD iff the minimum rank distance is at least d and |C| = p^(sn(m-d+1))."""
    expected = code.mrd_size()
    dist = min_rank_distance(code) if len(code) >= 2 else None
    distance_ok = dist is not None and dist >= code.d
    size_ok = len(code) == expected
    return MRDReport(distance_ok and size_ok, len(code), expected, dist, distance_ok, size_ok)


def is_linear_code(code: RankCode) -> bool:
    """Closure under addition and every scalar of Z_{p^s}, with 0 present.

    Stores the verdict in ``code.linear_verified``.
    """
    zero = MatZ.zeros(code.ring, code.m, code.n)
    ok = zero in code
    if ok:
        words = code.words
        ok = all(a + b in code for i, a in enumerate(words) for b in words[i:])
    if ok:
        ok = all(w.scale(c) in code for w in code.words for c in range(2, code.ring.modulus))
    code.linear_verified = ok
    return ok


@dataclass(frozen=True)
class MDSReport:
    min_row_hamming: int
    size: int
    alphabet_size: int
    log_size: int | None
    is_mds: bool


def _exact_log(value: int, base: int) -> int | None:
    k, acc = 0, 1
    while acc < value:
        acc *= base
        k += 1
    return k if acc == value else None


def hamming_mds_check(code: RankCode) -> MDSReport:
    """Treat each word as a length-m string of rows over Z_{p^s}^n.

    The code is MDS when its minimum Hamming distance equals
    ``m - log_{p^(sn)} |C| + 1`` with the logarithm an exact integer.
    """
    words = code.words
    if len(words) < 2:
        raise TooFewWords("minimum distance needs at least two words")
    row_words = [tuple(w.row(i) for i in range(code.m)) for w in words]
    if code.linear_verified:
        delta = min(sum(1 for r in rows if any(r)) for rows, w in zip(row_words, words)
                    if not w.is_zero())
    else:
        pairs = len(words) * (len(words) - 1) // 2
        if pairs > MAX_PAIRS:
            raise TooLarge(f"{pairs} pairs exceed the scan limit {MAX_PAIRS}")
        delta = min(sum(1 for x, y in zip(a, b) if x != y)
                    for i, a in enumerate(row_words) for b in row_words[i + 1:])
    alphabet = code.ring.modulus ** code.n
    k = _exact_log(len(words), alphabet)
    return MDSReport(delta, len(words), alphabet, k, k is not None and delta == code.m - k + 1)


def _fp_basis(words: Sequence[MatZ]) -> list[tuple[int, ...]]:
    """Reduced row echelon basis over Z_p of the span of ``words``."""
    p = words[0].ring.p
    rows: list[list[int]] = []
    pivots: list[int] = []
    for w in words:
        v = list(w.entries)
        for row, col in zip(rows, pivots):
            if v[col]:
                c = v[col]
                v = [(x - c * y) % p for x, y in zip(v, row)]
        col = next((j for j, x in enumerate(v) if x), None)
        if col is None:
            continue
        inv = pow(v[col], -1, p)
        v = [x * inv % p for x in v]
        for k, row in enumerate(rows):
            if row[col]:
                c = row[col]
                rows[k] = [(x - c * y) % p for x, y in zip(row, v)]
        rows.append(v)
        pivots.append(col)
    order = sorted(range(len(rows)), key=lambda k: pivots[k])
    return [tuple(rows[k]) for k in order]


def basis_lift(base: RankCode, ring: RingSpec) -> list[MatZ]:
    """Lift each word of a linear code over Z_p as a digit combination.

    A word ``sum a_i G_i`` (``G_i`` the echelon basis, ``0 <= a_i < p``) is
    sent to the same combination evaluated in ``ring``. Reducing mod p
    gives back the base word, so this is a set of lifts of the base code.
    """
    import itertools

    basis = _fp_basis(base.words)
    q = ring.modulus
    out = []
    for coeffs in itertools.product(range(base.ring.p), repeat=len(basis)):
        entries = [0] * (base.m * base.n)
        for a, g in zip(coeffs, basis):
            if a:
                entries = [x + a * y for x, y in zip(entries, g)]
        out.append(MatZ(ring, base.m, base.n, tuple(e % q for e in entries)))
    return out


def lift_mrd(base: RankCode, s: int, max_size: int | None = MAX_CODE_SIZE,
             embedding: str = "auto") -> RankCode:
    """Lift an MRD code over Z_p to an MRD code over Z_{p^s}.

    Builds ``A_j = A_1 + p * A_{j-1}`` for ``j = 2..s``. ``A_1`` is put into
    Z_{p^j} in one of two ways:

    * ``"digits"`` keeps entry values in ``[0, p)``. The result is MRD and
      contains the base verbatim, but carries break additive closure.
    * ``"basis"`` (linear bases only) lifts an echelon basis and takes all
      digit combinations, which makes every ``A_j`` a free Z_{p^j}-module.

    ``"auto"`` picks ``"basis"`` when the base is linear. Either way the
    result reduces mod p onto the base and has ``|A_1|**s`` words.

    Raises:
        TooLarge: if the lifted code would exceed ``max_size`` words.
        MissingZero: if the base does not contain the zero matrix.
        BaseNotMRD: if the base is not an MRD code over a prime field.
    """
    p = base.ring.p
    size = len(base) ** s
    if max_size is not None and size > max_size:
        raise TooLarge(f"lifted code would have {size} words (limit {max_size})")
    if base.ring.s != 1:
        raise BaseNotMRD(f"base must live over Z_{p}, got {base.ring}")
    if MatZ.zeros(base.ring, base.m, base.n) not in base:
        raise MissingZero("base code must contain the zero matrix")
    if not verify_mrd(base).is_mrd:
        raise BaseNotMRD("base code is not an MRD code")
    if embedding not in ("auto", "basis", "digits"):
        raise ValueError(f"unknown embedding {embedding!r}")
    linear = base.linear_verified
    if linear is None:
        linear = is_linear_code(base)
    if embedding == "auto":
        embedding = "basis" if linear else "digits"
    if embedding == "basis" and not linear:
        raise ValueError("basis embedding needs a linear base code")
    if s == 1:
        return base
    current = list(base.words)
    for j in range(2, s + 1):
        ring = make_ring(p, j)
        if embedding == "basis":
            heads = basis_lift(base, ring)
        else:
            heads = [lift_entries(w, ring) for w in base.words]
        tails = [lift_times_p(w, ring) for w in current]
        current = [h + t for h in heads for t in tails]
        # distinct heads differ mod p, so the sums never collide
        assert len(set(current)) == len(heads) * len(tails)
    return RankCode(make_ring(p, s), base.m, base.n, base.d, current,
                    linear_verified=None, base_linear=linear)


# file format ---------------------------------------------------------------

def dumps_code(code: RankCode) -> str:
    header = {"d": code.d, "linear": code.linear_verified, "m": code.m, "n": code.n,
              "p": code.ring.p, "s": code.ring.s}
    head = ", ".join(f"{json.dumps(k)}: {json.dumps(v)}" for k, v in header.items())
    body = ",\n".join("  " + json.dumps(w.rows(), separators=(",", ":")) for w in code.words)
    return "{" + head + ', "words": [\n' + body + "\n]}\n"


def save(code: RankCode, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_code(code))


def code_from_dict(obj: object, source: str = "code") -> RankCode:
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: expected a JSON object")
    ring = ring_from_header(obj, source)
    dims = {}
    for key in ("m", "n", "d"):
        value = obj.get(key)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ParseError(f"{source}: field '{key}' must be a positive integer")
        dims[key] = value
    linear = obj.get("linear")
    if linear is not None and not isinstance(linear, bool):
        raise ParseError(f"{source}: field 'linear' must be true, false or null")
    words_obj = obj.get("words")
    if not isinstance(words_obj, list):
        raise ParseError(f"{source}: field 'words' must be a list")
    words, seen = [], {}
    for i, rows in enumerate(words_obj):
        w = parse_rows(rows, ring, dims["m"], dims["n"], f"{source}: words[{i}]")
        if w.entries in seen:
            raise DuplicateWord(f"{source}: words[{i}] duplicates words[{seen[w.entries]}]")
        seen[w.entries] = i
        words.append(w)
    # the header flag is informational; verdicts are always recomputed
    return RankCode(ring, dims["m"], dims["n"], dims["d"], words)


def loads_code(text: str, source: str = "code") -> RankCode:
    return code_from_dict(loads_json(text, source), source)


def load(path: str) -> RankCode:
    with open(path, encoding="utf-8") as fh:
        return loads_code(fh.read(), path)


def words_as_code(words: Iterable[MatZ], d: int) -> RankCode:
    """Wrap an arbitrary nonempty matrix set (e.g. a clique) as a code."""
    words = list(words)
    first = words[0]
    return RankCode(first.ring, first.m, first.n, d, words)
