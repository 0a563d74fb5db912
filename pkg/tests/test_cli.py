import json
import math

import pytest

from liebiharm.cli import main, parse_problem
from liebiharm.errors import InvalidInput

NIL = {"algebra": "nil", "metric1": {"family": "nil", "params": {"lambda": 2}},
       "metric2": [1, 0, 0, 0, 3, 0, 0, 0, 1],
       "xi": {"family": "nil-generic",
              "params": {"alpha1": 1, "alpha2": "1/2", "beta1": 0, "beta2": 1, "alpha3": 2, "beta3": -1}}}
E02 = {"algebra": "e02", "metric1": {"family": "e02", "params": {"mu": 1, "nu": 1}},
       "metric2": {"family": "e02", "params": {"mu": "1/2", "nu": 1}},
       "xi": {"family": "e02-xi1", "params": {"gamma": 0, "a": 1, "b": 1}}}
SQUASHED = {"lambda1": 2, "mu1": 1, "nu1": 1, "lambda2": 2, "mu2": 1, "nu2": 1}


@pytest.fixture
def write(tmp_path):
    def f(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)
    return f


def test_analyze(write, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["analyze", write("p.json", E02), "--out", str(out)]) == 0
    r = json.loads(out.read_text())
    assert r["harmonic"] is False and r["biharmonic"] is True
    assert r["arithmetic_path"] == "rational"
    assert "harmonic=False" in capsys.readouterr().out


def test_analyze_stdout_is_json(write, capsys):
    assert main(["analyze", write("p.json", NIL)]) == 0
    assert json.loads(capsys.readouterr().out)["tau"] == [-0.5, -0.25, 0.0]


def test_analyze_float_flag(write, capsys):
    assert main(["analyze", write("p.json", NIL), "--float"]) == 0
    assert json.loads(capsys.readouterr().out)["arithmetic_path"] == "float"


def test_analyze_list(write, capsys):
    assert main(["analyze", write("p.json", [NIL, E02])]) == 0
    assert len(json.loads(capsys.readouterr().out)) == 2


def test_degenerate_metric(write, capsys):
    bad = dict(NIL, metric1=[1, 2, 0, 2, 1, 0, 0, 0, 1])
    assert main(["analyze", write("p.json", bad)]) == 2
    assert "DegenerateMetric" in capsys.readouterr().err


def test_not_homomorphism(write, capsys):
    bad = {"algebra": "su2", "metric1": [1, 0, 0, 0, 1, 0, 0, 0, 1], "metric2": [1, 0, 0, 0, 1, 0, 0, 0, 1],
           "xi": [1, 0, 0, 0, 1, 0, 0, 0, 2]}
    assert main(["analyze", write("p.json", bad)]) == 2
    err = capsys.readouterr().err
    assert "NotHomomorphism" in err and "residual" in err


@pytest.mark.parametrize("text", ["{", "[1, 2]"])
def test_bad_json(tmp_path, text, capsys):
    p = tmp_path / "p.json"
    p.write_text(text)
    assert main(["analyze", str(p)]) == 2


def test_missing_file(capsys):
    assert main(["analyze", "/nonexistent/p.json"]) == 2


def test_parse_problem_errors():
    with pytest.raises(InvalidInput):
        parse_problem(dict(NIL, xi=[1, 2, 3]))
    with pytest.raises(InvalidInput):
        parse_problem({"algebra": "nil"})


def test_verify_case(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--case", "thm4.2.1", "--n", "50", "--out", str(out)]) == 0
    (r,) = json.loads(out.read_text())
    assert r["case"] == "thm4.2.1" and r["passed"]


def test_verify_unknown_case(capsys):
    assert main(["verify", "--case", "nosuch"]) == 2
    assert "nosuch" in capsys.readouterr().err


def test_verify_unknown_group(capsys):
    assert main(["verify", "--group", "so3"]) == 2


def test_verify_probe_passes_when_refuted(capsys):
    assert main(["verify", "--case", "thm4.2.2.ii.sqrt-mu1", "--n", "10"]) == 0


def test_verify_group_sol(capsys):
    assert main(["verify", "--group", "sol", "--n", "20"]) == 0
    results = json.loads(capsys.readouterr().out)
    assert any(r["case"] == "equivalence.sol" for r in results)


def test_bad_tolerance(capsys):
    assert main(["verify", "--case", "thm3.1", "--tol", "0"]) == 2


def test_usage_error(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2


def test_search(write, capsys):
    spec = {"family": "su2-xi3", "metrics": ["diag", "diag"], "fixed": SQUASHED, "free": {"a": [0.5, 1.2]},
            "objective": "bitension_norm_sq"}
    assert main(["search", write("s.json", spec)]) == 0
    (r,) = json.loads(capsys.readouterr().out)["results"]
    assert r["converged"] and abs(math.cos(r["params"]["a"]) ** 2 - 0.5) < 1e-6


def test_search_no_free_params(write, capsys):
    spec = {"family": "su2-xi3", "metrics": ["diag", "diag"], "fixed": dict(SQUASHED, a=1), "free": {}}
    assert main(["search", write("s.json", spec)]) == 2
    assert "NoFreeParams" in capsys.readouterr().err


def test_search_nil_scan(write, capsys):
    spec = {"family": "nil-generic", "metrics": ["nil", "nil"], "fixed": {"lambda1": 2.0, "lambda2": 0.7},
            "free": {k: [-3, 3] for k in ("alpha1", "alpha2", "beta1", "beta2", "alpha3", "beta3")},
            "mode": "scan", "n": 3, "max_evals": 2000}
    assert main(["search", write("s.json", spec)]) == 0
    assert json.loads(capsys.readouterr().out)["results"] == []
