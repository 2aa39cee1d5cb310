import json
import subprocess
import sys

import pytest

from zpsrank import codes
from zpsrank.cli import main
from zpsrank.graph import GammaSpec, canonical_max_clique, random_row_clique
from zpsrank.matrix import MatZ, save_matrix
from zpsrank.ring import make_ring

Z4 = make_ring(2, 2)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_matrix(tmp_path, rows, name="a.json"):
    path = tmp_path / name
    save_matrix(MatZ.from_rows(Z4, rows), str(path))
    return path


def params(p, s, m, n, d):
    return ["--p", p, "--s", s, "--m", m, "--n", n, "--d", d]


# rank ----------------------------------------------------------------------

def test_rank_text(tmp_path, capsys):
    code, out, _ = run(capsys, "rank", write_matrix(tmp_path, [[1, 0], [0, 2]]))
    assert code == 0
    assert out.strip() == "rho=2 rk=1 r=1 ks=[1]"


def test_rank_zero(tmp_path, capsys):
    code, out, _ = run(capsys, "rank", write_matrix(tmp_path, [[0, 0], [0, 0]]))
    assert code == 0 and out.startswith("rho=0 rk=0")


def test_rank_json(tmp_path, capsys):
    code, out, _ = run(capsys, "rank", write_matrix(tmp_path, [[2, 2], [2, 2]]), "--format", "json")
    report = json.loads(out)
    assert code == 0 and (report["rho"], report["rk"], report["ks"]) == (1, 0, [1])
    assert report["P"]["p"] == 2


def test_rank_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 2, "s": 2, "m": 1, "n": 1, "entries": [[9]]}')
    code, _, err = run(capsys, "rank", bad)
    assert code == 2 and "entries[0][0]" in err
    code, _, _ = run(capsys, "rank", tmp_path / "missing.json")
    assert code == 2


# gen-mrd / verify-code -----------------------------------------------------

def test_gen_mrd_and_verify(tmp_path, capsys):
    out_path = tmp_path / "c.json"
    code, out, _ = run(capsys, "gen-mrd", *params(2, 2, 2, 3, 2), "--out", out_path)
    assert code == 0
    assert out.strip() == "words=64 min_rank_distance=2 mrd=true linear=true mds=true"
    assert len(codes.load(str(out_path))) == 64
    code, out, _ = run(capsys, "verify-code", out_path)
    assert code == 0
    assert out.strip() == "words=64 min_rank_distance=2 mrd=true linear=true mds=true"


def test_gen_mrd_field_case(tmp_path, capsys):
    code, out, _ = run(capsys, "gen-mrd", *params(2, 1, 2, 2, 2))
    assert code == 0 and out.startswith("words=4 ")


def test_gen_mrd_guard(capsys):
    code, _, err = run(capsys, "gen-mrd", *params(2, 2, 5, 5, 2))
    assert code == 3 and "guard" in err


def test_gen_mrd_bad_parameters(capsys):
    code, _, _ = run(capsys, "gen-mrd", *params(4, 1, 2, 2, 2))
    assert code == 4
    code, _, _ = run(capsys, "gen-mrd", *params(2, 1, 2, 2, 3))
    assert code == 4


def test_verify_code_with_word_removed(tmp_path, capsys):
    full = codes.lift_mrd(codes_base(), 2)
    short = codes.RankCode(full.ring, full.m, full.n, full.d, full.words[:-1])
    path = tmp_path / "short.json"
    codes.save(short, str(path))
    code, out, _ = run(capsys, "verify-code", path, "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["mrd"] is False and report["words"] == 15


def test_verify_code_duplicate_word(tmp_path, capsys):
    path = tmp_path / "dup.json"
    path.write_text('{"p": 2, "s": 2, "m": 1, "n": 1, "d": 1, "words": [[[1]], [[2]], [[1]]]}')
    code, _, err = run(capsys, "verify-code", path)
    assert code == 2 and "DuplicateWord" not in err and "duplicates" in err


def codes_base():
    from zpsrank.gf import gabidulin_code

    return gabidulin_code(2, 2, 2, 2)


# graph-cert ----------------------------------------------------------------

@pytest.mark.parametrize("kind", ["alpha", "omega", "chi", "chi_complement"])
def test_graph_cert_kinds(capsys, kind):
    code, out, _ = run(capsys, "graph-cert", *params(2, 2, 2, 2, 2), "--kind", kind)
    report = json.loads(out)
    assert code == 0
    assert report["claimed_value"] == 16 and report["checks_passed"]
    assert report["sampled_translation_check"]


def test_graph_cert_brute(tmp_path, capsys):
    witness = tmp_path / "w.json"
    code, out, _ = run(capsys, "graph-cert", *params(2, 1, 2, 2, 2), "--kind", "alpha",
                       "--brute", "--out", witness)
    report = json.loads(out)
    assert code == 0 and report["claimed_value"] == 4
    assert report["brute"] == {"alpha": 4, "omega": 4, "agrees": True}
    assert len(codes.load(str(witness))) == 4


def test_graph_cert_brute_guard(capsys):
    code, _, _ = run(capsys, "graph-cert", *params(2, 2, 2, 2, 2), "--kind", "omega", "--brute")
    assert code == 3


def test_graph_cert_size_guard(capsys):
    code, _, _ = run(capsys, "graph-cert", *params(2, 3, 3, 3, 2), "--kind", "alpha")
    assert code == 3


# classify-clique -----------------------------------------------------------

def save_words(tmp_path, words, d, name="k.json"):
    path = tmp_path / name
    codes.save(codes.words_as_code(words, d), str(path))
    return path


def test_classify_canonical(tmp_path, capsys):
    spec = GammaSpec(Z4, 2, 2, 2)
    code, out, _ = run(capsys, "classify-clique", save_words(tmp_path, canonical_max_clique(spec), 2))
    report = json.loads(out)
    assert code == 0
    assert report["orientation"] == "row"
    assert report["transform"] == [[1, 0], [0, 1]] and report["offset"] == [[0, 0], [0, 0]]
    assert report["reconstruction_verified"]


def test_classify_transformed(tmp_path, capsys):
    spec = GammaSpec(Z4, 2, 2, 2)
    words, _, _ = random_row_clique(spec, 5)
    code, out, _ = run(capsys, "classify-clique", save_words(tmp_path, words, 2))
    assert code == 0 and json.loads(out)["reconstruction_verified"]


def test_classify_rejects(tmp_path, capsys):
    spec = GammaSpec(Z4, 2, 2, 2)
    words = canonical_max_clique(spec)
    far = MatZ.from_rows(Z4, [[0, 0], [0, 1]]) + MatZ.identity(Z4, 2)
    replaced = words[:-1] + [far]
    code, _, err = run(capsys, "classify-clique", save_words(tmp_path, replaced, 2))
    assert code == 4 and "NotAClique" in err
    code, _, err = run(capsys, "classify-clique", save_words(tmp_path, words[:-1], 2, "s.json"))
    assert code == 4 and "NotMaximum" in err


# graph-edges / determinism -------------------------------------------------

def test_graph_edges(capsys):
    code, out, _ = run(capsys, "graph-edges", *params(2, 1, 2, 2, 2))
    lines = out.splitlines()
    assert code == 0 and len(lines) == 16 * 9 // 2
    assert all(int(u) < int(v) for u, v in (line.split() for line in lines))


def test_outputs_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "gen-mrd", *params(3, 2, 2, 2, 2), "--out", a)
    run(capsys, "gen-mrd", *params(3, 2, 2, 2, 2), "--out", b)
    assert a.read_bytes() == b.read_bytes()
    first = run(capsys, "graph-cert", *params(2, 2, 2, 2, 2), "--kind", "chi", "--seed", 9)
    second = run(capsys, "graph-cert", *params(2, 2, 2, 2, 2), "--kind", "chi", "--seed", 9)
    assert first == second


def test_console_script_entry_point(tmp_path):
    path = write_matrix(tmp_path, [[1, 0], [0, 2]])
    result = subprocess.run([sys.executable, "-m", "zpsrank.cli", "rank", str(path)],
                            capture_output=True, text=True, check=False)
    assert result.returncode == 0 and result.stdout.strip() == "rho=2 rk=1 r=1 ks=[1]"
