import math

import pytest

from liebiharm.errors import InvalidInput, NoFreeParams
from liebiharm.search import SearchSpec, evaluate, minimize, problem_at, scan_biharmonic_not_harmonic
from liebiharm.tension import analyze

SQUASHED = {"lambda1": 2.0, "mu1": 1.0, "nu1": 1.0, "lambda2": 2.0, "mu2": 1.0, "nu2": 1.0}


def su2_xi3(objective, box, **kw):
    return SearchSpec("su2-xi3", ("diag", "diag"), SQUASHED, {"a": box}, objective, **kw)


def golden_section(f, lo, hi, tol=1e-12):
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    while b - a > tol:
        c, d = b - g * (b - a), a + g * (b - a)
        if f(c) < f(d):
            b = d
        else:
            a = c
    return (a + b) / 2


def test_tension_search_matches_golden_section():
    # oracle: the closed form for tau(xi3(a)) on these metrics is -sin(a)cos(a)/2 X3
    oracle = golden_section(lambda a: (math.sin(a) * math.cos(a) / 2) ** 2, 1.0, 2.0)
    r = minimize(su2_xi3("tension_norm_sq", (0.1, 3.0)), seed=0)
    assert r.converged
    assert abs(r.params["a"] - math.pi / 2) < 1e-6
    assert abs(r.params["a"] - oracle) < 1e-6


def test_bitension_search():
    r = minimize(su2_xi3("bitension_norm_sq", (0.5, 1.2)), seed=0)
    assert r.converged
    assert abs(math.cos(r.params["a"]) ** 2 - 0.5) < 1e-6
    rep = analyze(problem_at(su2_xi3("bitension_norm_sq", (0.5, 1.2)), r.params))
    assert rep.biharmonic and not rep.harmonic


def test_zero_at_start():
    r = minimize(su2_xi3("tension_norm_sq", (0.1, 3.0)), seed=0, start=[0.0])
    assert r.evals == 1 and r.converged and r.value == 0


def test_deterministic():
    s = su2_xi3("tension_norm_sq", (0.1, 3.0))
    assert minimize(s, seed=3) == minimize(s, seed=3)


def test_budget_exhaustion():
    r = minimize(su2_xi3("bitension_norm_sq", (0.5, 1.2), max_evals=5), seed=0)
    assert not r.converged and r.evals <= 5 + 2


def test_objective_nonnegative():
    s = su2_xi3("tension_norm_sq", (0.1, 3.0))
    assert all(evaluate(s, {**SQUASHED, "a": a / 10}) >= 0 for a in range(1, 30))


def test_e02_scan_finds_diagonal():
    s = SearchSpec("e02-xi1", ("e02", "e02"), {"gamma": 0, "mu1": 0.5, "nu1": 1, "mu2": 0.5, "nu2": 1},
                   {"a": (-3, 3), "b": (-3, 3)})
    w = scan_biharmonic_not_harmonic(s, n=20, seed=0)
    assert w
    for r in w:
        assert abs(abs(r.params["a"]) - abs(r.params["b"])) < 1e-5
        rep = analyze(problem_at(s, r.params))
        assert rep.biharmonic and not rep.harmonic
    assert [r.value for r in w] == sorted(r.value for r in w)


def test_nil_scan_is_empty():
    s = SearchSpec("nil-generic", ("nil", "nil"), {"lambda1": 2.0, "lambda2": 0.7},
                   {k: (-3, 3) for k in ("alpha1", "alpha2", "beta1", "beta2", "alpha3", "beta3")},
                   max_evals=3000)
    assert scan_biharmonic_not_harmonic(s, n=4, seed=0) == []


def test_spec_validation():
    with pytest.raises(NoFreeParams):
        SearchSpec("su2-xi3", ("diag", "diag"), {**SQUASHED, "a": 1.0}, {})
    with pytest.raises(InvalidInput):
        su2_xi3("tension_norm_sq", (1.0, 1.0))
    with pytest.raises(InvalidInput):
        SearchSpec("su2-xi3", ("diag", "diag"), {**SQUASHED, "a": 1.0}, {"a": (0, 1)})
    with pytest.raises(InvalidInput):
        SearchSpec("su2-xi3", ("diag", "diag"), {}, {"a": (0, 1)})
    with pytest.raises(InvalidInput):
        su2_xi3("energy", (0.1, 1.0))


def test_from_json():
    s = SearchSpec.from_json({"family": "su2-xi3", "metrics": ["diag", "diag"], "fixed": SQUASHED,
                              "free": {"a": [0.1, 3.0]}, "objective": "tension_norm_sq"})
    assert s.free == {"a": (0.1, 3.0)}
    with pytest.raises(InvalidInput):
        SearchSpec.from_json({"metrics": []})
