from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from liebiharm import linalg3 as la
from liebiharm.algebra_core import ALGEBRA_IDS, ad, bracket, catalog, check_invariants, jacobi_residual
from liebiharm.errors import UnknownAlgebra

ints = st.integers(-20, 20)
vecs = st.tuples(ints, ints, ints)
alg_ids = st.sampled_from(ALGEBRA_IDS)

X1, X2, X3 = la.basis(0), la.basis(1), la.basis(2)


def test_su2_bracket():
    assert bracket(catalog("su2"), X1, X2) == X3


def test_sol_bracket_is_linear():
    assert bracket(catalog("sol"), X3, la.add(X1, X2)) == (1, -1, 0)


def test_e02_ad_x3():
    m = ad(catalog("e02"), X3)
    assert la.column(m, 0) == (0, 1, 0)
    assert la.column(m, 1) == (-1, 0, 0)
    assert la.column(m, 2) == (0, 0, 0)


def test_sol_ad_x3_traceless():
    assert la.trace(ad(catalog("sol"), X3)) == 0


def test_nil_constants():
    c = catalog("nil").c
    nonzero = {(i, j, k): c[i][j][k] for i in la.RANGE for j in la.RANGE for k in la.RANGE if c[i][j][k]}
    assert nonzero == {(0, 1, 2): 1, (1, 0, 2): -1}


def test_sl2_constants():
    c = catalog("sl2").c
    assert (c[0][1][2], c[1][2][0], c[2][0][1]) == (-1, 1, 1)


@pytest.mark.parametrize("alg", ALGEBRA_IDS)
def test_catalog_invariants(alg):
    check_invariants(catalog(alg))


def test_unknown_algebra():
    with pytest.raises(UnknownAlgebra):
        catalog("so3")


@given(alg_ids, vecs, vecs)
def test_antisymmetry(alg, u, v):
    g = catalog(alg)
    assert bracket(g, u, v) == la.scale(-1, bracket(g, v, u))
    assert bracket(g, u, u) == (0, 0, 0)


@given(alg_ids, vecs, vecs, vecs)
def test_jacobi(alg, u, v, w):
    assert jacobi_residual(catalog(alg), u, v, w) == (0, 0, 0)


@given(alg_ids, vecs)
def test_unimodular(alg, u):
    assert la.trace(ad(catalog(alg), u)) == 0


@given(alg_ids, vecs, vecs)
def test_ad_matches_bracket(alg, u, v):
    g = catalog(alg)
    assert la.matvec(ad(g, u), v) == bracket(g, u, v)


@settings(max_examples=50)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=9, max_size=9))
def test_exact_inverse(entries):
    a = la.to_fraction(la.mat([entries[0:3], entries[3:6], entries[6:9]]))
    if la.det(a) == 0:
        return
    assert la.matmul(a, la.inverse(a)) == la.identity(la.Q(1))


def test_exact_sqrt():
    assert la.exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert la.exact_sqrt(Fraction(2)) is None
