import random

import pytest

from liebiharm import closed_forms as cf

CORE = [f for f in cf.CLOSED_FORMS if f.core]
EXTRA = [f for f in cf.CLOSED_FORMS if not f.core]


def test_registry():
    ids = [f.id for f in cf.CLOSED_FORMS]
    assert len(ids) == len(set(ids))
    assert {f.kind for f in cf.CLOSED_FORMS} <= {"tau", "tau2", "tau2_12", "test_matrix", "det", "kernel", "identity"}
    assert len([f for f in CORE if f.kind == "det"]) == 9


@pytest.mark.parametrize("form", CORE, ids=lambda f: f.id)
def test_core_forms_short_audit(form):
    r = cf.audit(form, n=15, seed=1)
    assert r.passed, r.witness


@pytest.mark.parametrize("form", EXTRA, ids=lambda f: f.id)
def test_product_displays(form):
    r = cf.audit(form, n=60, seed=2)
    assert r.passed, (r.failures, r.witness)


def test_misprints_have_corrected_twins():
    bad = [f for f in cf.CLOSED_FORMS if not f.expect_match]
    assert bad
    for f in bad:
        assert cf.closed_form(f.id + ".corrected").expect_match


def test_misprint_is_detected():
    r = cf.audit(cf.closed_form("thm7.1.tau"), n=30, seed=0)
    assert r.failures == r.n and r.passed


def test_exact_comparison_on_rationals():
    form = cf.closed_form("thm4.2.xi2.det")
    c = cf.compare(form, cf.sample(form, random.Random(0), exact=True))
    assert c.exact and c.residual == 0


def test_unknown_id():
    with pytest.raises(KeyError):
        cf.closed_form("thm9.9")


def test_audit_json():
    d = cf.audit(CORE[0], n=3).to_json()
    assert d["passed"] and d["n"] == 3
