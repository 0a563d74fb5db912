"""Levi-Civita product, unimodularity vector and curvature of a metric Lie algebra."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from . import linalg3 as la
from .algebra_core import LieAlgebra, ad, bracket
from .metric_space import Metric, OrthonormalFrame, orthonormal_frame


@dataclass(frozen=True)
class LCProduct:
    """``A[i][j][k]``: coefficient of X_k in A_{X_i} X_j."""

    A: tuple

    def __call__(self, u, v):
        out = [u[0] * 0] * 3
        for i, j in itertools.product(la.RANGE, la.RANGE):
            w = u[i] * v[j]
            if w == 0:
                continue
            aij = self.A[i][j]
            out = [out[k] + w * aij[k] for k in la.RANGE]
        return tuple(out)

    def matrix(self, u):
        """Matrix of ``v -> A_u v``."""
        one = u[0] * 0 + 1
        return la.from_columns([self(u, la.basis(j, one)) for j in la.RANGE])


def levi_civita_product(g: LieAlgebra, m: Metric) -> LCProduct:
    """Solve ``2<A_u v, w> = <[u,v],w> + <[w,u],v> + <[w,v],u>`` on basis triples."""
    gram = m.gram
    zero = gram[0][0] * 0
    half = (zero + 1) / 2
    ginv = la.inverse(gram)
    # cg[i][j][k] = <[X_i, X_j], X_k>
    cg = [[[sum((g.c[i][j][l] * gram[l][k] for l in la.RANGE if g.c[i][j][l]), zero)
            for k in la.RANGE] for j in la.RANGE] for i in la.RANGE]
    planes = []
    for i in la.RANGE:
        row = []
        for j in la.RANGE:
            rhs = tuple(half * (cg[i][j][k] + cg[k][i][j] + cg[k][j][i]) for k in la.RANGE)
            row.append(la.matvec(ginv, rhs))
        planes.append(tuple(row))
    return LCProduct(tuple(planes))


@dataclass(frozen=True)
class MetricLieAlgebra:
    algebra: LieAlgebra
    metric: Metric

    @cached_property
    def product(self) -> LCProduct:
        return levi_civita_product(self.algebra, self.metric)

    @cached_property
    def frame(self) -> OrthonormalFrame:
        return orthonormal_frame(self.metric)

    @cached_property
    def gram_inverse(self):
        return la.inverse(self.metric.gram)

    @property
    def exact(self) -> bool:
        return self.metric.exact

    def bracket(self, u, v):
        return bracket(self.algebra, u, v)

    def ad(self, u):
        return ad(self.algebra, u)

    def inner(self, u, v):
        return self.metric.inner(u, v)


def levi_civita(mla: MetricLieAlgebra) -> LCProduct:
    return mla.product


def unimodular_vector(mla: MetricLieAlgebra, frame: OrthonormalFrame | None = None):
    """``sum_i A_{e_i} e_i`` over an orthonormal frame (the cached one by default)."""
    frame = frame or mla.frame
    A = mla.product
    out = None
    for e in frame.vectors():
        t = A(e, e)
        out = t if out is None else la.add(out, t)
    return out


def unimodular_vector_via_trace(mla: MetricLieAlgebra):
    """``U`` with ``<U, v> = tr(ad_v)``, obtained by solving ``G U = t``."""
    one = mla.metric.gram[0][0] * 0 + 1
    t = tuple(la.trace(mla.ad(la.basis(k, one))) for k in la.RANGE)
    return la.solve(mla.metric.gram, t)


def unimodular_vector_contracted(mla: MetricLieAlgebra):
    """``sum_jk (G⁻¹)_jk A_{X_j} X_k``: the frame sum without square roots."""
    A, ginv = mla.product, mla.gram_inverse
    one = ginv[0][0] * 0 + 1
    out = la.zero_vec(one * 0)
    for j, k in itertools.product(la.RANGE, la.RANGE):
        if ginv[j][k] != 0:
            out = la.add(out, la.scale(ginv[j][k], A(la.basis(j, one), la.basis(k, one))))
    return out


def curvature(mla: MetricLieAlgebra, u, v):
    """Matrix of ``w -> A_u A_v w - A_v A_u w - A_{[u,v]} w``."""
    A = mla.product
    bu, bv = A.matrix(u), A.matrix(v)
    return la.mat_sub(la.mat_sub(la.matmul(bu, bv), la.matmul(bv, bu)),
                      A.matrix(mla.bracket(u, v)))
