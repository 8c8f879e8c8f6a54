import json
import subprocess
import sys

import pytest

from higherops import hcat, nops, symops
from higherops.cli import main
from higherops.trees import M


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_trees(capsys):
    code, out, _ = run(capsys, "trees", "--n", "1", "--max-tips", "3")
    assert code == 0
    assert out.splitlines()[0] == "# trees: n=1 max_tips=3 pruned=False"
    assert "# 4 trees" in out
    code, out, _ = run(capsys, "trees", "--n", "2", "--max-tips", "1", "--max-nodes", "3")
    assert "2; 1,1; rho_1=[1]; rho_0=[1]" in out.splitlines()
    code, out, _ = run(capsys, "trees", "--n", "1", "--max-tips", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and len(doc["trees"]) == 3


def test_bad_usage(capsys):
    code, _, err = run(capsys, "trees", "--n", "1", "--max-tips", "-1")
    assert code == 2 and "max-tips" in err
    assert run(capsys, "pi0", "--n", "0")[0] == 2
    assert run(capsys, "verify", "--suite", "nope")[0] == 2
    assert run(capsys, "nerve", "--p", "5")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "trees", "--format", "xml")[0] == 2


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "pisigma", "--n", "4")
    assert code == 0 and "PASS pisigma" in out
    code, out, _ = run(capsys, "verify", "--suite", "mtilde", "--bound", "2")
    assert code == 0 and out.startswith("# verify: suites=mtilde")


def test_verify_input(capsys, tmp_path):
    good = tmp_path / "perm.json"
    good.write_text(symops.to_json(symops.permutation_operad(3)))
    code, out, _ = run(capsys, "verify", "--input", str(good))
    assert code == 0 and "PASS" in out
    doc = json.loads(good.read_text())
    entry = next(e for e in doc["mult"] if e["sigma"] == "[1,1,2]:3->2" and e["args"][0] == "[2,1]:2->2")
    entry["value"] = "[1,2,3]:3->3" if entry["value"] != "[1,2,3]:3->3" else "[2,1,3]:3->3"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--input", str(bad))
    assert code == 1 and "FAIL associativity fails for sigma=" in out
    junk = tmp_path / "junk.json"
    junk.write_text("{}")
    assert run(capsys, "verify", "--input", str(junk))[0] == 2
    assert run(capsys, "verify", "--input", str(tmp_path / "missing.json"))[0] == 2


def test_pi0(capsys):
    code, out, _ = run(capsys, "pi0", "--n", "1", "--k", "3", "--bound", "4")
    assert code == 0 and "components 6" in out and "stable true" in out
    code, out, _ = run(capsys, "pi0", "--n", "1", "--k", "2", "--bound", "3", "--format", "csv")
    assert out.splitlines()[0] == "n,k,vertex_bound,decorations,components"
    code, out, _ = run(capsys, "pi0", "--n", "2", "--k", "2", "--bound", "4", "--format", "json")
    assert json.loads(out)["counts"]["4"] == 1


def test_sym(capsys, tmp_path):
    A = nops.free_n_operad({M(1, 0, 2): ["b"]}, 2, hcat.connecting_trees(1, 2))
    path = tmp_path / "A.json"
    path.write_text(nops.to_json(A))
    code, out, _ = run(capsys, "sym", "--input", str(path), "--n", "1", "--k", "2")
    assert code == 0
    assert "classes 2" in out and "expected k!|A_k| = 2" in out
    assert run(capsys, "sym", "--input", str(path), "--n", "2", "--k", "2")[0] == 2
    assert run(capsys, "sym", "--k", "2")[0] == 2


def test_nerve(capsys):
    code, out, _ = run(capsys, "nerve", "--n", "1", "--k", "1", "--p", "1", "--bound", "2")
    assert code == 0 and "chains 18" in out and "equal" in out


def test_dot(capsys, tmp_path):
    out_file = tmp_path / "h.dot"
    code, _, _ = run(capsys, "dot", "--what", "h", "--n", "2", "--k", "2", "--bound", "2",
                     "--output", str(out_file))
    text = out_file.read_text()
    assert code == 0 and text.startswith("digraph h {")
    code, out, _ = run(capsys, "dot", "--what", "poset", "--n", "2", "--k", "2")
    assert out.count("->") == 4
    tree = tmp_path / "t.txt"
    tree.write_text("2; 2,1; rho_1=[1,1]; rho_0=[1]")
    code, out, _ = run(capsys, "dot", "--what", "tree", "--input", str(tree))
    assert code == 0 and out.startswith("digraph tree")
    assert run(capsys, "dot", "--what", "cube")[0] == 2


def test_deterministic(capsys):
    a = run(capsys, "dot", "--what", "h", "--n", "1", "--k", "2", "--bound", "2")[1]
    b = run(capsys, "dot", "--what", "h", "--n", "1", "--k", "2", "--bound", "2")[1]
    assert a == b


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "higherops", "trees", "--n", "1", "--max-tips", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "# 3 trees" in r.stdout
