import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from liebiharm import linalg3 as la
from liebiharm import tension as T
from liebiharm.algebra_core import ALGEBRA_IDS
from liebiharm.classification import random_problem
from liebiharm.errors import InvalidInput, NotHomomorphism
from liebiharm.homomorphism import instantiate
from liebiharm.metric_space import Metric, metric_family

Q = la.Q
I = la.identity(Q(1))
ZERO = la.zeros(Q(0))
seeds = st.integers(0, 10**6)
alg_ids = st.sampled_from(ALGEBRA_IDS)


def nil_example():
    xi = instantiate("nil-generic", {"alpha1": 1, "beta2": 1, "alpha2": 0, "beta1": 0, "beta3": 0, "alpha3": 1})
    return T.make_problem("nil", I, I, xi)


def e02_example(mu2=Q(1, 2)):
    m1 = metric_family("e02", {"mu": Q(1), "nu": Q(1)})
    m2 = metric_family("e02", {"mu": mu2, "nu": Q(1)})
    return T.make_problem("e02", m1, m2, instantiate("e02-xi1", {"gamma": 0, "a": 1, "b": 1}))


def su2_xi3(a):
    m = Metric.diag(2.0, 1.0, 1.0)
    return T.make_problem("su2", m, m, instantiate("su2-xi3", {"a": a}))


def test_nil_tension():
    assert T.tau(nil_example()) == (0, -1, 0)
    assert T.tau_via_trace(nil_example()) == (0, -1, 0)


def test_e02_tension():
    assert T.tau(e02_example()) == (0, 0, Q(-1, 2))


@pytest.mark.parametrize("alg", ALGEBRA_IDS)
def test_identity_is_harmonic(alg):
    g = ((2, 1, 0), (1, 3, 0), (0, 0, 5))
    p = T.make_problem(alg, g, g, I)
    assert T.tau(p) == (0, 0, 0)
    r = T.analyze(p)
    assert r.harmonic and r.biharmonic


def test_su2_xi3_tension():
    t = T.tau(su2_xi3(math.pi / 4))
    assert la.max_abs(la.sub(t, (0, 0, -0.25))) < 1e-15


@pytest.mark.parametrize("alg", ALGEBRA_IDS)
def test_zero_map(alg):
    p = T.make_problem(alg, I, I, ZERO)
    assert T.tau_via_trace(p) == (0, 0, 0)
    m, d = T.test_matrix(p)
    assert m == ZERO and d == 0


def test_e02_biharmonic_not_harmonic():
    p = e02_example()
    assert T.tau2(p) == (0, 0, 0)
    assert T.tau2_via_trace(p) == (0, 0, 0)
    r = T.analyze(p)
    assert (r.harmonic, r.biharmonic) == (False, True)


@pytest.mark.parametrize("mu2", [Q(1, 3), Q(3, 4), Q(1)])
def test_e02_example_any_mu2(mu2):
    p = e02_example(mu2)
    assert T.tau2(p) == (0, 0, 0)
    assert (T.tau(p) == (0, 0, 0)) == (mu2 == 1)


def test_su2_cos_squared_half():
    p = su2_xi3(math.pi / 4)
    s_tau, _, w = T.field_scales(p)
    assert la.max_abs(T.tau2(p)) < 1e-15
    r = T.analyze(p)
    assert (r.harmonic, r.biharmonic) == (False, True)
    assert r.tau_residual > 1e-3


def test_sol_det_diagonal():
    al, be, nu1 = Q(2, 3), Q(-5, 2), Q(7, 4)
    m1 = metric_family("sol-diag", {"nu": nu1})
    m2 = metric_family("sol-diag", {"nu": Q(3)})
    p = T.make_problem("sol", m1, m2, instantiate("sol-xi2", {"alpha": al, "beta": be, "a": 1, "b": 2}))
    assert T.test_matrix(p)[1] == 2 * (al**2 + be**2) / nu1**2


@pytest.mark.parametrize("mu1,mu2,al,be,zero", [
    (Q(1, 2), Q(1, 3), Q(2), Q(3), False),
    (Q(1), Q(1, 3), Q(2), Q(3), True),
    (Q(1, 2), Q(1), Q(2), Q(3), True),
    (Q(1, 2), Q(1, 3), Q(2), Q(-2), True),
])
def test_e02_det_vanishing(mu1, mu2, al, be, zero):
    nu1 = Q(5, 2)
    m1 = metric_family("e02", {"mu": mu1, "nu": nu1})
    m2 = metric_family("e02", {"mu": mu2, "nu": Q(2)})
    p = T.make_problem("e02", m1, m2, instantiate("e02-xi2", {"alpha": al, "beta": be, "a": 1, "b": 1}))
    d = T.test_matrix(p)[1]
    assert d == mu2 * (mu2 - 1) * (al**2 - be**2) * (mu1 - 1) / (nu1**2 * mu1)
    assert (d == 0) == zero


def test_sol_not_biharmonic():
    # frozen from the printed sol xi2 bitension closed form at alpha=beta=0, a=1, b=0
    p = T.make_problem("sol", I, I, instantiate("sol-xi2", {"alpha": 0, "beta": 0, "a": 1, "b": 0}))
    assert T.tau2(p) == (-3, 0, 3)
    r = T.analyze(p)
    assert (r.harmonic, r.biharmonic) == (False, False)


def test_report_json():
    d = T.analyze(e02_example()).to_json()
    assert d["arithmetic_path"] == "rational"
    assert d["tau"] == [0, 0, -0.5] and d["biharmonic"] is True
    assert {"tau", "tau2", "test_matrix", "det_test", "harmonic", "biharmonic",
            "tolerance_used", "arithmetic_path"} <= set(d)


def test_bad_tolerance():
    with pytest.raises(InvalidInput):
        T.analyze(nil_example(), tol=0)


def test_make_problem_validates():
    with pytest.raises(NotHomomorphism):
        T.make_problem("su2", I, I, ((1, 0, 0), (0, 1, 0), (0, 0, 2)))


def test_paths():
    assert nil_example().arithmetic_path == "rational"
    p = T.make_problem("nil", I, I, I, path="float")
    assert p.arithmetic_path == "float"
    with pytest.raises(InvalidInput):
        T.make_problem("nil", I, I, I, path="fast")


@settings(max_examples=60, deadline=None)
@given(seeds, alg_ids, st.booleans())
def test_dual_routes_agree(seed, alg, exact):
    p = random_problem(alg, random.Random(seed), exact)
    r1, r2 = T.dual_route_residual(p)
    if p.exact:
        assert (r1, r2) == (0, 0)
    else:
        assert r1 < 1e-9 and r2 < 1e-9


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(("nil", "e02", "sol")))
def test_frame_route_agrees(seed, alg):
    p = random_problem(alg, random.Random(seed), True)
    a, b = T.tau(p), T.tau(p, via="frame")
    assert la.max_abs(la.sub(a, b)) <= 1e-10 * max(1.0, float(la.max_abs(a)))


@settings(max_examples=40, deadline=None)
@given(seeds, alg_ids)
def test_harmonic_implies_biharmonic(seed, alg):
    p = random_problem(alg, random.Random(seed), True)
    r = T.analyze(p)
    assert r.biharmonic or not r.harmonic


@settings(max_examples=30, deadline=None)
@given(seeds, alg_ids)
def test_bitension_is_linear_in_tau(seed, alg):
    p = random_problem(alg, random.Random(seed), True)
    L = T.bitension_operator(p)
    assert la.max_abs(la.sub(la.matvec(L, T.tau(p)), T.tau2(p))) <= 1e-9 * max(1.0, float(la.max_abs(T.tau2(p))))


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(("nil", "e02", "sol")))
def test_kernel_condition(seed, alg):
    # a biharmonic map has tau in the kernel of the test matrix
    p = random_problem(alg, random.Random(seed), True)
    r = T.analyze(p)
    if r.biharmonic:
        assert la.matvec(r.test_matrix, r.tau) == (0, 0, 0)


def test_kernel_contains_tau_at_witness():
    p = su2_xi3(math.pi / 4)
    m, _ = T.test_matrix(p)
    assert la.max_abs(la.matvec(m, T.tau(p))) < 1e-15
