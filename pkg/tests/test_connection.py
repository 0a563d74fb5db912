import random

import pytest
from hypothesis import given, settings, strategies as st

from liebiharm import linalg3 as la
from liebiharm.algebra_core import ALGEBRA_IDS, catalog
from liebiharm.classification import random_gram
from liebiharm.connection import (MetricLieAlgebra, curvature, levi_civita, unimodular_vector,
                                  unimodular_vector_contracted, unimodular_vector_via_trace)
from liebiharm.metric_space import Metric

Q = la.Q
X1, X2, X3 = (la.basis(i, Q(1)) for i in la.RANGE)
seeds = st.integers(0, 10**6)
alg_ids = st.sampled_from(ALGEBRA_IDS)


def mla(alg, gram):
    return MetricLieAlgebra(catalog(alg), Metric(gram))


def random_mla(seed, alg, exact=True):
    return mla(alg, random_gram(random.Random(seed), exact))


def test_bi_invariant_su2():
    A = levi_civita(mla("su2", la.identity(Q(1))))
    assert A(X1, X2) == (0, 0, Q(1, 2))


def test_su2_squashed():
    A = levi_civita(mla("su2", ((2, 0, 0), (0, 1, 0), (0, 0, 1))))
    assert A(X1, X2) == (0, 0, 0)


def test_nil_central_direction():
    A = levi_civita(mla("nil", ((3, 0, 0), (0, 3, 0), (0, 0, 1))))
    assert A(X3, X3) == (0, 0, 0)


@pytest.mark.parametrize("alg", ALGEBRA_IDS)
def test_unimodular_vector_vanishes(alg):
    m = random_mla(11, alg)
    assert unimodular_vector_contracted(m) == (0, 0, 0)
    assert unimodular_vector_via_trace(m) == (0, 0, 0)
    assert la.max_abs(unimodular_vector(m)) < 1e-12


def test_e02_unimodular_sweep():
    rng = random.Random(5)
    for _ in range(50):
        mu, nu = rng.uniform(0.01, 1.0), rng.uniform(0.01, 10.0)
        assert la.max_abs(unimodular_vector(mla("e02", ((1.0, 0, 0), (0, mu, 0), (0, 0, nu))))) < 1e-12


def test_su2_sectional_curvature():
    m = mla("su2", la.identity(Q(1)))
    assert m.inner(la.matvec(curvature(m, X1, X2), X2), X1) == Q(1, 4)


@settings(max_examples=40)
@given(seeds, alg_ids)
def test_torsion_free_and_metric(seed, alg):
    m = random_mla(seed, alg)
    A = m.product
    rng = random.Random(seed)
    for _ in range(3):
        u, v, w = (tuple(Q(rng.randint(-5, 5)) for _ in range(3)) for _ in range(3))
        assert la.sub(A(u, v), A(v, u)) == m.bracket(u, v)
        assert m.inner(A(u, v), w) == -m.inner(v, A(u, w))


@settings(max_examples=25)
@given(seeds, alg_ids)
def test_curvature_skew(seed, alg):
    m = random_mla(seed, alg)
    rng = random.Random(seed + 1)
    u, v, w, z = (tuple(Q(rng.randint(-4, 4)) for _ in range(3)) for _ in range(4))
    assert curvature(m, u, u) == la.zeros(Q(0))
    k = curvature(m, u, v)
    assert m.inner(la.matvec(k, w), z) == -m.inner(la.matvec(k, z), w)
