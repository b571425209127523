import json
import shutil
import subprocess
import sys
from functools import cached_property

import pytest

from holonomy_lab import cli
from holonomy_lab import contactgeo as cg

from conftest import CORPUS


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, (json.loads(out) if out else None), err


def write_model(tmp_path, doc, name="model.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def heisenberg_doc(m=1, metric=None):
    xs = [f"x{i}" for i in range(1, m + 1)]
    ys = [f"y{i}" for i in range(1, m + 1)]
    n = 2 * m + 1
    theta = [f"-{y}" for y in ys] + xs + ["1"]
    frame = []
    for i in range(m):
        v = ["0"] * n
        v[i], v[-1] = "1", ys[i]
        frame.append(v)
    for i in range(m):
        v = ["0"] * n
        v[m + i], v[-1] = "1", f"-{xs[i]}"
        frame.append(v)
    metric = metric or [["1" if i == j else "0" for j in range(2 * m)] for i in range(2 * m)]
    return {"schema": cli.SCHEMA, "name": "h", "dimension": n, "m": m, "variables": xs + ys + ["z"], "theta": theta,
            "frame": frame, "metric": metric}


# ---------------------------------------------------------------- analyze

def test_analyze_flat_heisenberg(capsys):
    code, rep, _ = run_json(capsys, "analyze", str(CORPUS["heisenberg3"]))
    assert code == 0
    assert {k: v["label"] for k, v in rep["holonomy"].items()} == {
        "SCHOUTEN": "TRIVIAL", "ADAPTED": "TRIVIAL", "WAGNER": "TRIVIAL"}
    assert rep["table1_row"] == "heisenberg"
    assert rep["conventions"] == cg.CONVENTIONS or set(cg.CONVENTIONS) <= set(rep["conventions"])


def test_analyze_pseudo_hermitian_heisenberg(capsys):
    code, rep, _ = run_json(capsys, "analyze", str(CORPUS["heisenberg3_cr"]))
    assert code == 0
    assert rep["flags"]["pseudo_hermitian"] is True and rep["flags"]["pseudo_einstein"] is True
    assert rep["spinors"]


def test_asymmetric_metric_exits_with_validation_code(tmp_path, capsys):
    path = write_model(tmp_path, heisenberg_doc(1, metric=[["1", "1"], ["0", "1"]]))
    code, _, err = run(capsys, "analyze", path)
    assert code == 2 and "metric[0][1]" in err


def test_bad_expression_exits_with_parse_code(tmp_path, capsys):
    doc = heisenberg_doc(1)
    doc["theta"][0] = "-y1 +"
    code, _, err = run(capsys, "analyze", write_model(tmp_path, doc))
    assert code == 1 and "theta[0]" in err


def test_missing_file_is_a_parse_error(tmp_path, capsys):
    code, _, _ = run(capsys, "analyze", str(tmp_path / "nope.json"))
    assert code == 1


# ---------------------------------------------------------------- subsym and spin

def test_subsym_torsion_family(capsys):
    code, rep, _ = run_json(capsys, "subsym", "torsion-family", "--m", "3", "--lambda", "1", "--mu", "2")
    assert code == 0
    assert rep["zoo_match"] == "SO_M_PLUS_2" and rep["scal_tau"] == "36"


def test_subsym_heisenberg_row(capsys):
    code, rep, _ = run_json(capsys, "subsym", "heisenberg", "--m", "3")
    assert code == 0 and rep["table1"]["row"] == "heisenberg" and rep["table1"]["matches"]


def test_subsym_param_domain(capsys):
    code, _, err = run(capsys, "subsym", "torsion-family", "--m", "3", "--lambda", "0", "--mu", "1")
    assert code == 2 and "PARAM_DOMAIN" in err


@pytest.mark.parametrize("alg,dim", [("su", 2), ("u", 0)])
def test_spin(capsys, alg, dim):
    code, rep, _ = run_json(capsys, "spin", "--m", "3", "--algebra", alg)
    assert code == 0 and rep["annihilator_dim"] == dim
    if dim:
        assert rep["weight_profile"] == [1, 0, 0, 1] and rep["extremal_only"]


def test_spin_size_guard(capsys):
    code, _, err = run(capsys, "spin", "--m", "9", "--algebra", "su")
    assert code == 2 and "SIZE_GUARD" in err


def test_transport(capsys):
    code, rep, _ = run_json(capsys, "transport", str(CORPUS["heisenberg2_zmetric"]), "--plane", "0,1",
                            "--side", "1/10")
    assert code == 0 and rep["max_error"] < 1e-4


# ---------------------------------------------------------------- selftest

def test_selftest_filter(capsys):
    code, rep, _ = run_json(capsys, "selftest", "--filter", "wagner")
    assert code == 0 and rep["failed"] == 0 and rep["checks"]
    assert all("wagner" in c["name"] for c in rep["checks"])


def test_selftest_is_deterministic(capsys):
    _, a, _ = run(capsys, "selftest", "--filter", "heisenberg2_zmetric", "--json")
    _, b, _ = run(capsys, "selftest", "--filter", "heisenberg2_zmetric", "--json")
    assert a == b and json.loads(a)["seed"] == cli.SEED


def test_injected_sign_bug_is_named(capsys, monkeypatch):
    original = cg.FrameGeometry.__dict__["Gamma"].func

    def negated(self):
        return [G.scale(-1) for G in original(self)]
    prop = cached_property(negated)
    prop.__set_name__(cg.FrameGeometry, "Gamma")
    monkeypatch.setattr(cg.FrameGeometry, "Gamma", prop)
    code, rep, _ = run_json(capsys, "selftest", "--filter", "heisenberg2_zmetric.schouten")
    assert code == 3
    failed = [c["name"] for c in rep["checks"] if c["status"] == "FAIL"]
    assert "corpus.heisenberg2_zmetric.schouten.metric_compatibility" in failed


def test_wrong_expectation_fails_selftest(tmp_path, capsys):
    doc = json.loads(CORPUS["heisenberg2"].read_text())
    doc["expect"]["holonomy"]["SCHOUTEN"]["label"] = "U_M"
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "broken.json").write_text(json.dumps(doc))
    shutil.copy(CORPUS["heisenberg3"], corpus / "heisenberg3.json")
    code, rep, _ = run_json(capsys, "selftest", "--corpus", str(corpus), "--filter", "expect")
    assert code == 3
    status = {c["name"]: c["status"] for c in rep["checks"]}
    assert status == {"corpus.broken.expect": "FAIL", "corpus.heisenberg3.expect": "PASS"}


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "holonomy_lab", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()
