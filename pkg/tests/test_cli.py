import json
import subprocess
import sys

import pytest

from omintail.cli import run


def _json(argv):
    code, text = run(argv)
    return code, json.loads(text)


def test_iso_prints_verdict():
    code, doc = _json(["iso", "w", "w*"])
    assert code == 0 and doc == {"verdict": "NotIso", "depth": 2}
    code, doc = _json(["iso", "sum(eta,n:1,eta)", "eta"])
    assert doc["verdict"] == "Iso"


def test_iso_depth_flag():
    code, doc = _json(["iso", "sum(w,w)", "w", "--depth", "1"])
    assert (code, doc["verdict"]) == (0, "Unknown")


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    [],
    ["parse", "n:0"],
    ["parse", "sum(w,"],
    ["iso", "w", "w", "--depth", "-1"],
    ["classify", "w"],
    ["classify", "n:2", "5"],
    ["verify"],
    ["verify", "--suite", "nope"],
    ["model", "build", "Field", "w"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _ = run(argv)
    assert code == 2


def test_parse_reports_bounds():
    code, doc = _json(["parse", "sum( n:1 , eta )", "--json"])
    assert doc == {"term": "sum(n:1,eta)", "has_least": True, "has_greatest": False, "size": None}
    assert run(["parse", "f(n:1)"]) == (0, "rep(n:1,sum(n:1,n:1,eta,n:1,n:1))")


def test_classify():
    assert run(["classify", "X", "(2,1/2)"]) == (0, "PureDense")
    code, text = run(["classify", "--scan", "g(f(n:1))", "--count", "5"])
    lines = [json.loads(line) for line in text.splitlines()]
    assert code == 0 and len(lines) == 5
    assert all(set(d) == {"point", "class"} for d in lines)
    code, text = run(["classify", "--scan", "z", "--from", "0", "--count", "3"])
    assert json.loads(text.splitlines()[0]) == {"point": "0", "class": "Phi"}


def test_reduce():
    assert run(["reduce", "g", "n:1"]) == (0, "rep(w,sum(n:1,n:1))")
    code, doc = _json(["reduce", "T", "eta", "--json"])
    assert doc["result"] == "rep(w,sum(rep(eta,sum(n:1,n:1,eta,n:1,n:1)),n:1))"


def test_tailiso():
    assert _json(["tailiso", "eta", "eta"])[1]["verdict"] == "Iso"
    assert _json(["tailiso", "w", "w*", "--label-free"])[1]["verdict"] == "NotIso"
    code, doc = _json(["tailiso", "w", "w", "--base-b", "(4,(1,0))"])
    assert doc["verdict"] == "Iso"


def test_model_commands():
    code, doc = _json(["model", "build", "AffineOdag", "eta"])
    assert code == 0 and doc["index"] == "sum(n:2,eta)"
    code, doc = _json(["model", "ladder", "Odag", "n:3", "--count", "3"])
    assert doc["claimed_order"] == "n:3" and len(doc["classes"]) == 3
    code, doc = _json(["model", "ladder", "AffineOdag", "w"])
    assert code == 0 and doc["params"] == 2
    code, doc = _json(["model", "nonsimple", "AffineOdag", "--nmax", "2"])
    assert (doc["n"], doc["witness"]) == (2, "2y-x")
    code, doc = _json(["model", "nonsimple", "AffineOdag", "--nmax", "1"])
    assert code == 1 and doc["found"] is False
    code, doc = _json(["model", "cantail", "eta", "--trials", "30", "--seed", "7"])
    assert code == 0 and doc["seed"] == 7 and doc["ok"]
    code, doc = _json(["model", "faithful", "Odag", "--samples", "30"])
    assert code == 0 and doc["violations"] == 0


def test_model_ladder_params():
    code, doc = _json(["model", "ladder", "AffineOdag", "w", "--params", "(0,0):1", "(0,0):-1;(0,1):2"])
    assert code == 0 and doc["claimed_order"] == "w"
    code, _ = run(["model", "ladder", "AffineOdag", "w", "--params", "nonsense"])
    assert code == 2


def test_inv_files(tmp_path):
    theory = tmp_path / "theory.json"
    theory.write_text(json.dumps({"kind": "finite", "cuts": ["c1", "c2"]}))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps({"fillings": {"c1": 3}}))
    b.write_text(json.dumps({"fillings": {"c1": 4}}))
    assert _json(["inv", "smooth", str(theory), str(a)])[1] == {"c1": 3, "c2": 0}
    assert _json(["inv", "appiso", str(theory), str(a), str(b)])[1] == {"apparently_isomorphic": False}
    assert run(["inv", "appiso", str(theory), str(a)])[0] == 2
    assert run(["inv", "smooth", str(theory), str(tmp_path / "missing.json")])[0] == 2
    rat = tmp_path / "rat.json"
    rat.write_text(json.dumps({"kind": "rational"}))
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"listing": [["1/2", 2], ["1/3", 5]]}))
    assert _json(["inv", "f2", str(rat), str(m)])[1] == [["1/3", 5], ["1/2", 2]]


def test_verify_suite_and_determinism():
    code, first = _json(["verify", "--suite", "invariants", "--suite", "nonsimplicity", "--json", "--seed", "3"])
    _, second = _json(["verify", "--suite", "invariants", "--suite", "nonsimplicity", "--json", "--seed", "3"])
    assert code == 0 and first["status"] == "pass" and first["seed"] == 3
    first.pop("timing"), second.pop("timing")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
    assert [s["suite"] for s in first["suites"]] == ["invariants", "nonsimplicity"]


def test_verify_list():
    code, text = run(["verify", "--list"])
    assert code == 0 and len(text.splitlines()) == 10


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "omintail", "iso", "w", "w*"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["verdict"] == "NotIso"
    out = subprocess.run([sys.executable, "-m", "omintail", "frobnicate"], capture_output=True, text=True)
    assert out.returncode == 2
