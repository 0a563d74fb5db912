import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from liebiharm import classification as C
from liebiharm.homomorphism import instantiate

CATALOG = C.theorem_catalog()
PROBES = [c for c in CATALOG if c.expect == "refuted"]


def test_catalog_size_and_ids():
    ids = [c.id for c in CATALOG]
    assert len(ids) >= 40
    assert len(ids) == len(set(ids))
    for must in ("thm3.1", "thm4.2.1", "thm5.1.4.xi2", "thm5.1.4.xi3", "thm6.1.9.v", "ex6", "thm7.1.iii"):
        assert must in ids


def test_groups_cover_catalog():
    grouped = {c.id for g in C.GROUPS for c in C.cases_in_group(g)}
    assert grouped == {c.id for c in CATALOG}


def test_every_case_has_a_verdict():
    for c in CATALOG:
        assert c.expected in C.VERDICTS
        assert c.expect in ("holds", "refuted")


@pytest.mark.parametrize("c", CATALOG, ids=lambda c: c.id)
def test_condition_samples_are_homomorphisms(c):
    rng = random.Random(c.id)
    for _ in range(3):
        p = C.condition_sample(c, rng)
        assert c.condition(p, C.Ctx(0 if C._exact(p) else C.CONDITION_TOL))
        C.problem_of(c, p)  # validates the matrix


def test_item9_v_encoding():
    c = C.case("thm6.1.9.v")
    b, cc = 0.7, -1.1
    r = math.sqrt(math.sin(cc) ** 2 + math.sin(b) ** 2 * math.cos(cc) ** 2)
    for k in (0, 1):
        ca = (-1) ** k * math.sin(cc) / r
        sa = (-1) ** (k + 1) * math.sin(b) * math.cos(cc) / r
        p = {"a": math.atan2(sa, ca), "b": b, "c": cc}
        assert c.condition(p, C.Ctx(1e-12))
    assert not c.condition({"a": 0.3, "b": b, "c": cc}, C.Ctx(1e-12))


@pytest.mark.parametrize("cid", ["thm3.1", "thm4.2.1", "prop.bi.1", "ex6", "prop6.1.6.bnh"])
def test_named_cases(cid):
    r = C.verify_case(C.case(cid), n=60)
    assert r.passed, r.failures[:1]


@pytest.mark.parametrize("c", PROBES, ids=lambda c: c.id)
def test_misprinted_readings_are_refuted(c):
    r = C.verify_case(c, n=20)
    assert r.failures and r.passed


def test_e02_has_no_equivalence():
    # biharmonic-not-harmonic maps exist, so the equivalence sweep must find them
    assert "e02" not in C.EQUIVALENCE_ALGEBRAS
    for alg in ("e02", "su2"):
        with pytest.raises(ValueError):
            C.verify_equivalence(alg)
    c = C.TheoremCase("tmp", "e02-xi1", C.E02, C.EQUIV, lambda p, ctx: True,
                      lambda p, rng: p.update(gamma=0, a=1, b=1, mu1=1, mu2=0.5))
    r = C.verify_case(c, n=5)
    assert not r.passed


def test_sweep_is_deterministic():
    c = C.case("thm4.1.1.i")
    a, b = C.verify_case(c, n=30, seed=4), C.verify_case(c, n=30, seed=4)
    assert a.to_json() == b.to_json()


def test_sweep_json():
    d = C.verify_case(C.case("thm3.1"), n=5).to_json()
    assert d["case"] == "thm3.1" and d["passed"] and d["n_failures"] == 0


def test_verify_rejects_bad_n():
    with pytest.raises(ValueError):
        C.verify_case(C.case("thm3.1"), n=0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_bi_invariant_round_metric_is_harmonic(seed):
    c = C.case("prop.bi.2")
    p = C.condition_sample(c, random.Random(seed))
    assert C.analyze(C.problem_of(c, p)).harmonic
