import itertools
import random
from collections import deque

import pytest

from oracles import image_parameters
from zpsrank.canonical import inner_rank
from zpsrank.errors import BadParameters, DimensionMismatch, NotAClique, NotMaximum, TooLarge
from zpsrank.graph import (
    CERTIFICATES,
    CliqueForm,
    ExplicitGraph,
    GammaSpec,
    adjacent,
    alpha_certificate,
    brute_alpha_omega,
    brute_omega,
    build_explicit_graph,
    canonical_max_clique,
    certificate_coloring,
    classify_max_clique,
    complement_chi_certificate,
    is_clique,
    is_connected,
    is_independent,
    omega_certificate,
    path_between,
    random_column_clique,
    random_row_clique,
    same_set,
    verify_translation_automorphism,
)
from zpsrank.matrix import MatZ, random_invertible, random_matrix
from zpsrank.ring import make_ring

Z2, Z3, Z4, Z8 = make_ring(2, 1), make_ring(3, 1), make_ring(2, 2), make_ring(2, 3)


def spec_of(p, s, m, n, d):
    return GammaSpec(make_ring(p, s), m, n, d)


def naive_max_set(size, related):
    """Largest vertex set whose pairs all satisfy ``related``, by brute force."""
    best = 1
    for k in range(2, size + 1):
        found = any(all(related(u, v) for u, v in itertools.combinations(c, 2))
                    for c in itertools.combinations(range(size), k))
        if not found:
            break
        best = k
    return best


def bfs_components(graph):
    seen, comps = set(), 0
    for start in range(graph.size):
        if start in seen:
            continue
        comps += 1
        queue = deque([start])
        seen.add(start)
        while queue:
            u = queue.popleft()
            for v in graph.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    return comps


# spec and adjacency --------------------------------------------------------

def test_spec_values():
    spec = spec_of(2, 2, 2, 3, 2)
    assert spec.vertex_count == 4**6
    assert spec.alpha_value == 64 and spec.omega_value == 64
    with pytest.raises(BadParameters):
        spec_of(2, 1, 2, 2, 3)
    with pytest.raises(BadParameters):
        spec_of(2, 1, 3, 2, 2)
    with pytest.raises(BadParameters):
        spec_of(2, 1, 2, 2, 1)


def test_adjacent_examples():
    spec = spec_of(2, 2, 2, 2, 2)
    a = MatZ.identity(Z4, 2)
    assert not adjacent(a, a, spec)
    assert adjacent(a + MatZ.diag(Z4, [2, 0]), a, spec)
    assert not adjacent(MatZ.identity(Z4, 2), spec.zero(), spec)
    with pytest.raises(DimensionMismatch):
        adjacent(MatZ.zeros(Z4, 2, 3), spec.zero(), spec)


def test_adjacent_matches_image_oracle():
    spec = spec_of(2, 3, 2, 3, 2)
    rng = random.Random(0)
    for _ in range(200):
        a, b = random_matrix(Z8, 2, 3, rng), random_matrix(Z8, 2, 3, rng)
        r, ks = image_parameters(a - b)
        assert adjacent(a, b, spec) == (a != b and r + len(ks) < 2)


# explicit graph ------------------------------------------------------------

def test_explicit_f2_graph():
    spec = spec_of(2, 1, 2, 2, 2)
    graph = build_explicit_graph(spec)
    rank_one = sum(1 for i in range(1, 16) if inner_rank(spec.vertex(i)) == 1)
    assert graph.size == 16 and rank_one == 9
    assert all(graph.degree(v) == 9 for v in range(16))
    for u, v in itertools.combinations(range(16), 2):
        assert graph.has_edge(u, v) == adjacent(spec.vertex(u), spec.vertex(v), spec)


def test_explicit_z4_graph_is_regular():
    spec = spec_of(2, 2, 2, 2, 2)
    graph = build_explicit_graph(spec)
    assert graph.size == 256
    oracle_ranks = [r + len(ks) for r, ks in map(image_parameters, map(spec.vertex, range(1, 256)))]
    expected = sum(1 for r in oracle_ranks if r < 2)
    assert {graph.degree(v) for v in range(256)} == {expected}


def test_explicit_graph_guard():
    with pytest.raises(TooLarge):
        build_explicit_graph(spec_of(2, 2, 2, 3, 2), max_vertices=2**10)


def test_explicit_graph_helpers():
    k5 = ExplicitGraph.complete(5)
    assert k5.complement().masks == ExplicitGraph.empty(5).masks
    g = ExplicitGraph.from_edges(4, [(0, 1), (2, 3), (1, 1)])
    assert sorted(g.edges()) == [(0, 1), (2, 3)]
    assert g.edge_list_text() == "0 1\n2 3\n"
    assert not g.is_connected() and bfs_components(g) == 2
    assert ExplicitGraph.from_edges(3, [(0, 1), (1, 2)]).is_connected()


@pytest.mark.parametrize("params", [(2, 1, 2, 2, 2), (2, 2, 2, 2, 2), (3, 1, 2, 2, 2)])
def test_connected(params):
    spec = spec_of(*params)
    assert is_connected(spec)
    assert bfs_components(build_explicit_graph(spec)) == 1


# paths ---------------------------------------------------------------------

def test_path_examples():
    spec = spec_of(2, 2, 2, 2, 2)
    assert path_between(spec.zero(), spec.zero(), spec) == [spec.zero()]
    path = path_between(spec.zero(), MatZ.identity(Z4, 2), spec)
    assert path == [spec.zero(), MatZ.diag(Z4, [1, 0]), MatZ.identity(Z4, 2)]


def test_random_paths_are_valid():
    spec = spec_of(2, 3, 3, 4, 2)
    rng = random.Random(1)
    for _ in range(100):
        a, b = random_matrix(Z8, 3, 4, rng), random_matrix(Z8, 3, 4, rng)
        path = path_between(a, b, spec)
        assert path[0] == a and path[-1] == b
        assert len(path) - 1 <= inner_rank(b - a)
        assert all(adjacent(x, y, spec) for x, y in zip(path, path[1:]))


def test_paths_with_larger_d():
    spec = spec_of(3, 2, 3, 3, 3)
    rng = random.Random(2)
    for _ in range(50):
        a, b = random_matrix(spec.ring, 3, 3, rng), random_matrix(spec.ring, 3, 3, rng)
        path = path_between(a, b, spec)
        assert len(path) - 1 <= -(-inner_rank(b - a) // 2)
        assert all(inner_rank(y - x) < 3 for x, y in zip(path, path[1:]))


# translations --------------------------------------------------------------

def test_translation_zero_and_exhaustive():
    spec = spec_of(2, 2, 2, 2, 2)
    assert verify_translation_automorphism(spec, spec.zero(), sample=None)
    assert verify_translation_automorphism(spec, random_matrix(Z4, 2, 2, 3), sample=None)
    assert verify_translation_automorphism(spec_of(2, 3, 3, 4, 2), random_matrix(Z8, 3, 4, 4), sample=300)


def test_entrywise_squaring_is_not_an_automorphism():
    spec = spec_of(2, 2, 2, 2, 2)
    square = lambda x: MatZ(x.ring, x.m, x.n, tuple(e * e for e in x.entries))  # noqa: E731
    assert not verify_translation_automorphism(spec, spec.zero(), sample=None, mapping=square)
    # an explicit violating pair: 0 ~ diag(2, 0) but both square to 0
    x, y = spec.zero(), MatZ.diag(Z4, [2, 0])
    assert adjacent(x, y, spec) and square(x) == square(y)


# certificates --------------------------------------------------------------

def test_canonical_clique():
    spec = spec_of(2, 2, 2, 2, 2)
    clique = canonical_max_clique(spec)
    assert len(clique) == 16 and is_clique(clique, spec)
    assert len(canonical_max_clique(spec_of(2, 1, 2, 2, 2))) == 4
    with pytest.raises(TooLarge):
        canonical_max_clique(spec_of(2, 2, 3, 3, 3), max_size=2**10)


def independent_tiling_check(spec, cert, block_ok):
    """Recompute the partition as explicit sets and test every block."""
    seen = set()
    for block in cert.blocks():
        keys = {x.entries for x in block}
        assert len(keys) == len(block) and not seen & keys
        seen |= keys
        assert block_ok(block, spec)
    assert len(seen) == spec.vertex_count


@pytest.mark.parametrize("params", [(2, 1, 2, 2, 2), (2, 2, 2, 2, 2), (3, 1, 2, 2, 2), (2, 1, 2, 3, 2)])
def test_certificates(params):
    spec = spec_of(*params)
    a = alpha_certificate(spec)
    w = omega_certificate(spec)
    c = complement_chi_certificate(spec)
    assert a.checks_passed and w.checks_passed and c.checks_passed
    assert a.claimed_value == spec.alpha_value == c.claimed_value
    assert w.claimed_value == spec.omega_value
    assert a.claimed_value * w.claimed_value == spec.vertex_count
    assert is_independent(a.witness, spec) and is_clique(w.witness, spec)
    independent_tiling_check(spec, a, is_clique)
    independent_tiling_check(spec, w, is_independent)


def test_certificate_values_for_z4():
    spec = spec_of(2, 2, 2, 2, 2)
    for kind, fn in CERTIFICATES.items():
        cert = fn(spec)
        assert cert.kind == kind
        assert cert.claimed_value == 16 and cert.checks_passed
        report = cert.to_dict("w.json")
        assert report["witness_file"] == "w.json" and report["checks_passed"]


def test_chi_colouring_is_proper():
    spec = spec_of(2, 2, 2, 2, 2)
    colour = certificate_coloring(CERTIFICATES["chi"](spec))
    assert len(colour) == 256 and len(set(colour.values())) == 16
    graph = build_explicit_graph(spec)
    assert all(colour[u] != colour[v] for u, v in graph.edges())
    comp = certificate_coloring(CERTIFICATES["chi_complement"](spec))
    assert all(comp[u] != comp[v] for u, v in graph.complement().edges())


def test_complement_blocks_are_maximum_cliques():
    spec = spec_of(2, 1, 2, 2, 2)
    cert = complement_chi_certificate(spec)
    omega = brute_omega(build_explicit_graph(spec))
    assert all(len(b) == omega and is_clique(b, spec) for b in cert.blocks())


def test_broken_tiling_is_detected():
    spec = spec_of(2, 1, 2, 2, 2)
    cert = alpha_certificate(spec)
    assert cert.checks_passed
    from zpsrank.graph import _tiling_checks

    offsets = cert.partition_offsets[:-1] + [cert.partition_offsets[0]]
    checks = _tiling_checks(spec, cert.partition_base, offsets, lambda r: r < spec.d)
    assert checks["cover_count"] and not checks["cover_disjoint"]


# brute force ---------------------------------------------------------------

def test_brute_examples():
    assert brute_alpha_omega(build_explicit_graph(spec_of(2, 1, 2, 2, 2))) == (4, 4)
    assert brute_alpha_omega(ExplicitGraph.complete(5)) == (1, 5)
    assert brute_alpha_omega(ExplicitGraph.empty(7)) == (7, 1)
    with pytest.raises(TooLarge):
        brute_alpha_omega(ExplicitGraph.empty(65))
    with pytest.raises(TooLarge):
        brute_omega(ExplicitGraph.empty(513))


def test_brute_matches_naive_search():
    rng = random.Random(5)
    for _ in range(15):
        size = rng.randint(4, 11)
        edges = [e for e in itertools.combinations(range(size), 2) if rng.random() < 0.5]
        g = ExplicitGraph.from_edges(size, edges)
        alpha = naive_max_set(size, lambda u, v: not g.has_edge(u, v))
        omega = naive_max_set(size, g.has_edge)
        assert brute_alpha_omega(g) == (alpha, omega)


def test_brute_omega_z4():
    assert brute_omega(build_explicit_graph(spec_of(2, 2, 2, 2, 2))) == 16


# classification ------------------------------------------------------------

SPECS = [(2, 1, 2, 2, 2), (2, 2, 2, 2, 2), (3, 1, 2, 2, 2)]


def test_classify_canonical_clique():
    spec = spec_of(2, 2, 2, 2, 2)
    form = classify_max_clique(canonical_max_clique(spec), spec)
    assert form.orientation == "row"
    assert form.transform == MatZ.identity(Z4, 2) and form.offset == spec.zero()


def test_classify_left_columns_clique():
    spec = spec_of(2, 2, 2, 2, 2)
    words = CliqueForm("column", MatZ.identity(Z4, 2), spec.zero()).members(spec)
    assert all(w[0, 1] == w[1, 1] == 0 for w in words)
    form = classify_max_clique(words, spec)
    assert form.orientation == "column"
    assert form.transform == MatZ.identity(Z4, 2)
    assert same_set(form.members(spec), words)


@pytest.mark.parametrize("params", SPECS)
def test_classify_round_trips(params):
    spec = spec_of(*params)
    rng = random.Random(7)
    for _ in range(20):
        words, _, _ = random_row_clique(spec, rng)
        form = classify_max_clique(words, spec)
        assert form.orientation == "row"
        assert same_set(form.members(spec), words)
        words, _, _ = random_column_clique(spec, rng)
        form = classify_max_clique(words, spec)
        assert same_set(form.members(spec), words)


def test_classify_wide_spec_row_only():
    spec = spec_of(2, 1, 2, 3, 2)
    words, _, _ = random_row_clique(spec, 3)
    assert same_set(classify_max_clique(words, spec).members(spec), words)
    with pytest.raises(BadParameters):
        random_column_clique(spec, 0)


def test_classify_rejections():
    spec = spec_of(2, 2, 2, 2, 2)
    words, _, _ = random_row_clique(spec, 11)
    with pytest.raises(NotMaximum):
        classify_max_clique(words[:-1], spec)
    far = next(spec.vertex(i) for i in range(spec.vertex_count)
               if not any(adjacent(spec.vertex(i), w, spec) for w in words[1:3])
               and spec.vertex(i) not in words)
    with pytest.raises(NotAClique):
        classify_max_clique(words[:-1] + [far], spec)


def test_classify_with_random_transforms_over_z9():
    spec = spec_of(3, 2, 2, 2, 2)
    rng = random.Random(8)
    P = random_invertible(spec.ring, 2, rng)
    B = random_matrix(spec.ring, 2, 2, rng)
    words = CliqueForm("row", P, B).members(spec)
    assert len(words) == 81
    assert same_set(classify_max_clique(words, spec).members(spec), words)


def test_certificate_guard_fires_before_building():
    spec = spec_of(2, 3, 3, 3, 2)
    for fn in CERTIFICATES.values():
        with pytest.raises(TooLarge):
            fn(spec)
