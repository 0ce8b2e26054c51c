import json
import subprocess
import sys

from quiltforge.catalog import CatalogConfig, find_pair, run_catalog, verify_catalog_json
from quiltforge.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def test_usage_errors(tmp_path, capsys):
    assert run() == 2
    assert run("nonsense") == 2
    assert run("seeds", "--sizes", "8") == 2
    assert run("verify", "--pair", "99(1)") == 2
    assert run("verify", "--pair", str(tmp_path / "missing.json")) == 2
    assert run("signature", "--pair", "7(4)") == 2
    assert "quilt 7 has 3 classes" in capsys.readouterr().err


def test_seeds_and_quilt(tmp_path):
    seeds = tmp_path / "seeds.json"
    assert run("seeds", "--sizes", "7", "-o", seeds) == 0
    data = json.loads(seeds.read_text())
    assert [d["quiltName"] for d in data] == ["7"]
    out = tmp_path / "quilt.json"
    assert run("quilt", "--seed", seeds, "--name", "7", "-o", out) == 0
    q = json.loads(out.read_text())
    assert len(q["classes"]) == 3
    assert run("quilt", "--seed", seeds, "--name", "7", "--max-classes", "2",
               "-o", tmp_path / "x.json") == 1
    assert run("quilt", "--seed", seeds, "--name", "13a") == 2


def test_verify_signature_render(tmp_path, capsys):
    assert run("verify", "--pair", "7(3)", "--k", "2", "--count", "10") == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["certificate"] and rep["spectral"]["maxRelDeviation"] <= 1e-8
    assert run("verify", "--pair", "7(1)", "--bc", "dirichlet", "--mode", "graph", "--k", "2") == 0
    capsys.readouterr()
    assert run("signature", "--pair", "7(1)") == 0
    sig = json.loads(capsys.readouterr().out)
    assert sig["left"]["symbol"] == sig["right"]["symbol"]
    svgdir = tmp_path / "svg"
    assert run("render", "--pair", "7(2)", "-o", svgdir) == 0
    assert sorted(p.name for p in svgdir.iterdir()) == ["7(2)L.svg", "7(2)R.svg"]


def test_verify_pair_file(tmp_path, capsys):
    pair = {"left": {"n": 2, "a": "(1 2)", "b": "", "c": ""},
            "right": {"n": 2, "a": "(1 2)", "b": "", "c": ""}}
    f = tmp_path / "pair.json"
    f.write_text(json.dumps(pair))
    # an isomorphic pair is not transplantable
    assert run("verify", "--pair", f) == 2


def test_catalog_small(tmp_path, capsys):
    out = tmp_path / "out"
    assert run("catalog", "--sizes", "7", "-o", out) == 0
    data = json.loads((out / "catalog.json").read_text())
    assert [e["label"] for e in data["pairs"]] == ["7(1)", "7(2)", "7(3)"]
    assert all(e["treelike"] for e in data["pairs"])
    assert verify_catalog_json(data) == []
    assert len(list((out / "svg").iterdir())) == 6
    # lookup through the written catalog, and byte identical reruns
    assert run("signature", "--pair", "7(2)", "--catalog", out / "catalog.json") == 0
    out2 = tmp_path / "out2"
    assert run("catalog", "--sizes", "7", "-o", out2) == 0
    assert (out / "catalog.json").read_bytes() == (out2 / "catalog.json").read_bytes()
    assert (out / "seeds.json").read_bytes() == (out2 / "seeds.json").read_bytes()


def test_tampered_catalog_fails_reverification():
    c = run_catalog(CatalogConfig(sizes=(7,), spectral=False, render=False))
    data = json.loads(json.dumps(c.to_json()))
    data["pairs"][0]["intertwiner"][0][0] = "5/1"
    assert [f["label"] for f in verify_catalog_json(data)] == ["7(1)"]
    assert find_pair(data, "7(9)") is None


def test_console_script_help():
    r = subprocess.run([sys.executable, "-m", "quiltforge.cli", "--help"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "catalog" in r.stdout
