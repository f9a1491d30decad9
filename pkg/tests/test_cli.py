import io
import json
import subprocess
import sys

import pytest

from spectralign.cli import run

from conftest import CASE_INSTANCES


def call(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    out = io.StringIO()
    code = run(argv, out)
    return code, json.loads(out.getvalue())


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)
    return write


def _gen(kind, n, seed=0, extra=()):
    code, doc = call(["gen", "--kind", kind, "--n", str(n), "--seed", str(seed), *extra])
    assert code == 0
    doc.pop("params")
    return doc


def test_gen_kinds():
    assert _gen("path", 4)["edges"] == [[0, 1, 1], [1, 2, 1], [2, 3, 1]]
    assert len(_gen("random_tree", 10, extra=["--max-degree", "3"])["edges"]) == 9
    grid = _gen("random_subgrid", 7, seed=4)
    assert len(grid["coords"]) == 7
    code, doc = call(["gen", "--kind", "subgrid", "--points", "[[0,0],[0,1],[1,0],[1,1]]"])
    assert code == 0 and doc["n"] == 4 and len(doc["edges"]) == 4


def test_support_condition_precedes(files):
    c3, p3 = files("c3.json", _gen("cycle", 3)), files("p3.json", _gen("path", 3))
    code, doc = call(["support", "--g", c3, "--h", p3])
    assert code == 0 and doc["sigma"] == pytest.approx(3)
    code, doc = call(["condition", "--g", p3, "--h", c3])
    assert doc["kappa"] == pytest.approx(3)
    assert call(["precedes", "--g", p3, "--h", c3])[0] == 0
    code, doc = call(["precedes", "--g", c3, "--h", p3])
    assert code == 1 and doc["precedes"] is False


def test_resistance(files):
    c4 = files("c4.json", _gen("cycle", 4))
    code, doc = call(["resistance", "--g", c4, "--u", "0", "--v", "2"])
    assert doc["resistance"] == pytest.approx(1)
    code, doc = call(["resistance", "--g", c4])
    assert len(doc["resistance"]) == 4
    assert call(["resistance", "--g", c4, "--u", "0"])[0] == 2


def test_embed_stats(files):
    g = files("g.json", {"n": 4, "edges": [[1, 0], [1, 2], [1, 3]]})
    h = files("h.json", _gen("path", 4))
    code, doc = call(["embed-stats", "--g", g, "--h", h])
    assert (doc["dilation"], doc["congestion"], doc["sigma_upper"]) == (2, 2, 4.0)
    assert doc["sigma"] <= 4


def test_brute_commands(files):
    c3, p3 = files("c3.json", _gen("cycle", 3)), files("p3.json", _gen("path", 3))
    code, doc = call(["brute-sgd", "--g", p3, "--h", c3])
    assert code == 1 and doc["mapping"] is None
    assert call(["brute-sgd", "--g", c3, "--h", p3, "--no-prune"])[0] == 0
    code, doc = call(["brute-srgi", "--g", p3, "--h", c3])
    assert doc["kappa"] == pytest.approx(3)
    star, path = files("s.json", _gen("star", 5)), files("p.json", _gen("path", 5))
    assert call(["brute-feasible", "--g", star, "--h", path, "--k", "1", "--ell", "1"])[0] == 1
    assert call(["brute-feasible", "--g", star, "--h", path, "--k", "2", "--ell", "2"])[0] == 0


def test_align_and_certify(files):
    t = files("t.json", _gen("random_tree", 8, seed=1, extra=["--max-degree", "3"]))
    code, doc = call(["align-trees", "--g", t, "--h", t, "--k", "1", "--ell", "1"])
    assert code == 0 and doc["kappa_spectral"] == pytest.approx(1)
    code, doc = call(["srgi-certify", "--g", t, "--h", t, "--kappa", "1"])
    assert code == 0 and doc["certificate"]["kappa_bound"] == 1
    p, s = files("p.json", _gen("path", 4)), files("s.json", _gen("star", 4))
    assert call(["align-trees", "--g", p, "--h", s, "--k", "1", "--ell", "1"])[0] == 1


def test_hamiltonian_pipeline(files):
    pts, h_edges = CASE_INSTANCES["w2_degree2"]
    grid = files("grid.json", {"coords": [list(p) for p in pts]})
    code, inst = call(["reduce-ham", "--grid", grid])
    assert code == 0 and inst["h"]["n"] == 6
    inst.pop("params")
    inst_path = files("inst.json", inst)
    # the placement as a permutation of the standard cycle 0-1-...-5
    order = [0, 4, 2, 3, 1, 5]
    code, doc = call(["resolve", "--instance", inst_path, "--perm", json.dumps(order)])
    assert code == 0 and doc["result"] == "witness"
    w = files("w.json", doc["witness"])
    code, doc = call(["witness-verify", "--witness", w, "--instance", inst_path])
    assert code == 0 and doc["valid"] is True
    # a tampered witness is rejected
    bad = dict(json.load(open(w)))
    bad["lhs"] = ["0", "1"]
    code, doc = call(["witness-verify", "--witness", files("bad.json", bad), "--instance", inst_path])
    assert code == 1 and doc["valid"] is False


def test_resolve_finds_cycle(files):
    grid = files("grid.json", {"coords": [[0, 0], [0, 1], [1, 0], [1, 1]]})
    code, inst = call(["reduce-ham", "--grid", grid])
    inst.pop("params")
    # 0-1-3-2 is the square itself
    code, doc = call(["resolve", "--instance", files("i.json", inst), "--perm", "[0,1,3,2]"])
    assert code == 0 and doc["result"] == "hamiltonian_cycle"


def test_stdin_input(monkeypatch, files):
    c3 = files("c3.json", _gen("cycle", 3))
    code, doc = call(["support", "--g", "-", "--h", c3], stdin=json.dumps(_gen("path", 3)),
                     monkeypatch=monkeypatch)
    assert code == 0 and doc["sigma"] == pytest.approx(1)


def test_errors(files):
    code, doc = call(["support", "--g", "/nonexistent.json", "--h", "/nonexistent.json"])
    assert code == 2 and doc["type"] == "InputError"
    code, doc = call(["nosuchcommand"])
    assert code == 2
    bad = files("bad.json", {"n": 2, "edges": [[0, 5]]})
    code, doc = call(["resistance", "--g", bad])
    assert code == 2 and "out of range" in doc["error"]
    big = files("big.json", _gen("path", 10))
    code, doc = call(["brute-sgd", "--g", big, "--h", big])
    assert code == 2 and doc["type"] == "SizeLimitError"
    assert call(["gen", "--kind", "path", "--n", "3", "--jobs", "0"])[0] == 2


def test_sweep_small():
    code, doc = call(["sweep", "--suite", "resistance", "--n", "8", "--trials", "3"])
    assert code == 0 and doc["passed"] is True
    assert "seconds" not in json.dumps(doc)
    code, doc = call(["sweep", "--suite", "reduction", "--n", "5", "--trials", "2", "--timing"])
    assert code == 0 and "seconds" in doc


def test_output_is_deterministic(files):
    t = files("t.json", _gen("random_tree", 9, seed=5))
    argv = ["sweep", "--suite", "witness", "--trials", "5", "--seed", "3"]
    a, b = io.StringIO(), io.StringIO()
    run(argv, a)
    run(argv, b)
    assert a.getvalue() == b.getvalue()
    a, b = io.StringIO(), io.StringIO()
    run(["support", "--g", t, "--h", t, "--pretty"], a)
    run(["support", "--g", t, "--h", t, "--pretty"], b)
    assert a.getvalue() == b.getvalue() and "\n  " in a.getvalue()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spectralign", "gen", "--kind", "cycle", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 3
