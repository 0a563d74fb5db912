"""Tension and bitension fields of homomorphisms between metric Lie algebras.

Two independent routes are implemented: the Levi-Civita expansion (``tau``,
``tau2``) and the trace identities (``tau_via_trace``, ``tau2_via_trace``).
Frame sums ``sum_i F(xi e_i, xi e_i)`` are contracted with the inverse Gram
matrix, ``sum_jk (G⁻¹)_jk F(xi X_j, xi X_k)``, which equals the orthonormal
frame sum because ``E Eᵀ = G⁻¹`` and keeps rational inputs rational.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional

from . import linalg3 as la
from .algebra_core import catalog
from .connection import MetricLieAlgebra, unimodular_vector, unimodular_vector_contracted
from .errors import InvalidInput
from .homomorphism import Homomorphism, require_homomorphism
from .metric_space import Metric, adjoint_map

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Problem:
    src: MetricLieAlgebra
    dst: MetricLieAlgebra
    xi: Homomorphism

    def __post_init__(self):
        if self.src.algebra != self.xi.src or self.dst.algebra != self.xi.dst:
            raise InvalidInput("homomorphism algebras do not match the metric Lie algebras")

    @property
    def exact(self) -> bool:
        return self.src.exact and self.dst.exact and self.xi.exact

    @property
    def arithmetic_path(self) -> str:
        return "rational" if self.exact else "float"


def make_problem(algebra, metric1, metric2, xi, path: str = "auto", validate: bool = True) -> Problem:
    """Assemble a Problem for an endomorphism of one catalog algebra.

    ``metric1``/``metric2`` are Metrics or Gram matrices, ``xi`` a
    Homomorphism or 3x3 matrix. ``path`` is ``auto`` (exact when all inputs
    are rational), ``exact`` or ``float``.
    """
    g = catalog(algebra) if isinstance(algebra, str) else algebra
    grams = [m.gram if isinstance(m, Metric) else la.mat(m) for m in (metric1, metric2)]
    mx = xi.m if isinstance(xi, Homomorphism) else la.mat(xi)
    if path == "float":
        grams, mx = [la.to_float(x) for x in grams], la.to_float(mx)
    elif path == "exact":
        grams, mx = [la.to_fraction(x) for x in grams], la.to_fraction(mx)
    elif path != "auto":
        raise InvalidInput(f"unknown arithmetic path {path!r}")
    h = Homomorphism(g, g, mx)
    if validate:
        require_homomorphism(h)
    return Problem(MetricLieAlgebra(g, Metric(grams[0])), MetricLieAlgebra(g, Metric(grams[1])), h)


class _Acc:
    """Vector accumulator that remembers the largest term magnitude."""

    def __init__(self, zero):
        self.total = (zero, zero, zero)
        self.scale = 0

    def add(self, v, sign=1):
        self.total = la.add(self.total, v) if sign > 0 else la.sub(self.total, v)
        m = la.max_abs(v)
        if m > self.scale:
            self.scale = m


def _pairs(ginv):
    return [(j, k, ginv[j][k]) for j, k in itertools.product(la.RANGE, la.RANGE) if ginv[j][k] != 0]


def _images(p: Problem):
    one = p.xi.m[0][0] * 0 + 1
    return [la.column(p.xi.m, j) for j in la.RANGE], one


def _source_unimodular(p: Problem, via: str):
    return unimodular_vector(p.src) if via == "frame" else unimodular_vector_contracted(p.src)


def _frame_images(p: Problem):
    return [p.xi(e) for e in p.src.frame.vectors()]


def _tau_acc(p: Problem, via: str = "contracted") -> _Acc:
    B = p.dst.product
    cols, one = _images(p)
    acc = _Acc(one * 0)
    if via == "frame":
        for xe in _frame_images(p):
            acc.add(B(xe, xe))
    else:
        for j, k, w in _pairs(p.src.gram_inverse):
            acc.add(la.scale(w, B(cols[j], cols[k])))
    acc.add(p.xi(_source_unimodular(p, via)), -1)
    return acc


def tau(p: Problem, via: str = "contracted"):
    """``sum_i B_{xi e_i} xi e_i - xi(U_src)``.

    ``via="frame"`` sums over the explicit Cholesky frame of the source metric
    (float whenever that frame is irrational).
    """
    return _tau_acc(p, via).total


def _tau2_acc(p: Problem, t=None, via: str = "contracted") -> _Acc:
    B = p.dst.product
    cols, one = _images(p)
    if t is None:
        t = tau(p, via)
    acc = _Acc(one * 0)
    bt = B.matrix(t)

    def terms(x, y, w):
        # B_x B_y t and K(t, x) y = B_t B_x y - B_x B_t y - B_{[t,x]} y
        acc.add(la.scale(w, B(x, B(y, t))), -1)
        acc.add(la.scale(w, la.matvec(bt, B(x, y))), -1)
        acc.add(la.scale(w, B(x, la.matvec(bt, y))))
        acc.add(la.scale(w, B(p.dst.bracket(t, x), y)))

    if via == "frame":
        for xe in _frame_images(p):
            terms(xe, xe, one)
    else:
        for j, k, w in _pairs(p.src.gram_inverse):
            terms(cols[j], cols[k], w)
    acc.add(B(p.xi(_source_unimodular(p, via)), t))
    return acc


def tau_term_scale(p: Problem) -> float:
    """Largest single term in the tension sum; the scale for round-off comparisons."""
    return float(_tau_acc(p).scale)


def tau2(p: Problem, via: str = "contracted"):
    """Bitension ``-sum_i (B B tau + K(tau, xi e_i) xi e_i) + B_{xi U} tau``."""
    return _tau2_acc(p, via=via).total


def xi_adjoint(p: Problem):
    return adjoint_map(p.src.metric, p.dst.metric, p.xi.m)


def _trace_form(p: Problem, xs, op):
    """``tr(xi* ∘ op ∘ xi)``."""
    return la.trace(la.matmul(la.matmul(xs, op), p.xi.m))


def _ad_star(p: Problem, u):
    g2 = p.dst.metric.gram
    return la.solve(g2, la.matmul(la.transpose(p.dst.ad(u)), g2))


def tau_via_trace(p: Problem):
    """Solve ``G2 tau = t`` with ``t_j = tr(xi* ∘ ad_{X_j} ∘ xi)``."""
    xs = xi_adjoint(p)
    _, one = _images(p)
    t = tuple(_trace_form(p, xs, p.dst.ad(la.basis(j, one))) for j in la.RANGE)
    return la.solve(p.dst.metric.gram, t)


def tau2_via_trace(p: Problem, t=None):
    """Solve ``G2 tau2 = s`` with
    ``s_j = tr(xi*(ad_{X_j} + ad_{X_j}*) ad_tau xi) - <[X_j, tau], tau>``.

    ``tau`` defaults to the trace route so the two routes share nothing
    beyond the structure constants and Gram matrices.
    """
    if t is None:
        t = tau_via_trace(p)
    xs = xi_adjoint(p)
    _, one = _images(p)
    ad_t = p.dst.ad(t)
    s = []
    for j in la.RANGE:
        u = la.basis(j, one)
        op = la.matmul(la.mat_add(p.dst.ad(u), _ad_star(p, u)), ad_t)
        s.append(_trace_form(p, xs, op) - p.dst.inner(p.dst.bracket(u, t), t))
    return la.solve(p.dst.metric.gram, tuple(s))


def dual_route_residual(p: Problem):
    """Disagreement of the two routes for tau and for tau2.

    Each is the largest component difference over the largest term met by
    the connection route; exactly 0 on the rational path when they agree.
    """
    ta = _tau_acc(p)
    t2a = _tau2_acc(p, ta.total)
    out = []
    for acc, other in ((ta, tau_via_trace(p)), (t2a, tau2_via_trace(p))):
        d = la.max_abs(la.sub(acc.total, other))
        out.append(0.0 if d == 0 else float(d) / float(acc.scale) if acc.scale else math.inf)
    return tuple(out)


def test_matrix(p: Problem):
    """Test matrix in the basis (X1, X2, X3) and its determinant.

    ``m_ij = tr(xi*(ad_i + ad_i*) ad_j xi) - tr(xi* ad_{[X_i, X_j]} xi)``.
    """
    xs = xi_adjoint(p)
    _, one = _images(p)
    e = [la.basis(i, one) for i in la.RANGE]
    ads = [p.dst.ad(x) for x in e]
    stars = [_ad_star(p, x) for x in e]
    rows = []
    for i in la.RANGE:
        sym = la.mat_add(ads[i], stars[i])
        rows.append(tuple(
            _trace_form(p, xs, la.matmul(sym, ads[j]))
            - _trace_form(p, xs, p.dst.ad(p.dst.bracket(e[i], e[j])))
            for j in la.RANGE))
    m = tuple(rows)
    return m, la.det(m)


test_matrix.__test__ = False  # not a pytest test when imported into test modules


def det_scale(m) -> float:
    """Largest Leibniz term of ``det(m)``: the scale for relative det tests."""
    return la.max_abs(tuple(abs(x) for x in la.det_terms(m)))


@dataclass(frozen=True)
class TensionReport:
    tau: tuple
    tau2: tuple
    test_matrix: tuple
    det_test: object
    harmonic: bool
    biharmonic: bool
    tolerance_used: float
    arithmetic_path: str
    tau_scale: object = 0
    tau2_scale: object = 0
    det_scale: object = 0
    frame_exact: Optional[bool] = None
    weights: Optional[tuple] = None  # d2 from field_scales

    @property
    def tau_residual(self) -> float:
        return _relative(_weighted(self.tau, self.weights), self.tau_scale)

    @property
    def tau2_residual(self) -> float:
        return _relative(_weighted(self.tau2, self.weights), self.tau2_scale)

    def to_json(self) -> dict:
        f = lambda x: [f(v) for v in x] if isinstance(x, tuple) else _num(x)
        return {
            "tau": f(self.tau),
            "tau2": f(self.tau2),
            "test_matrix": [f(r) for r in self.test_matrix],
            "det_test": _num(self.det_test),
            "harmonic": self.harmonic,
            "biharmonic": self.biharmonic,
            "tolerance_used": self.tolerance_used,
            "arithmetic_path": self.arithmetic_path,
            "tau_relative_residual": self.tau_residual,
            "tau2_relative_residual": self.tau2_residual,
            "frame_path": None if self.frame_exact is None else ("rational" if self.frame_exact else "float"),
        }


def _num(x):
    return float(x) if not isinstance(x, (int, bool)) else x


def _relative(v, s) -> float:
    m = la.max_abs(v)
    if m == 0:
        return 0.0
    return float(m / s) if s else float("inf")


def is_zero(v, scale, tol: float, exact: bool) -> bool:
    if exact:
        return all(x == 0 for x in v)
    return la.max_abs(v) <= tol * scale


def field_scales(p: Problem):
    """Natural magnitudes of tau and tau2, and the weights to measure them with.

    Everything is expressed in units normalised by ``d_i = sqrt(G_ii)`` on
    each side (an orthonormal frame when the metric is diagonal), so metric
    anisotropy does not inflate the scale.  The magnitudes are built from the
    inputs (Levi-Civita coefficients, structure constants, xi, the source
    Gram inverse and unimodular vector) rather than from the computed terms:
    a field whose terms vanish individually still gets a meaningful scale.
    The tau2 scale propagates the tau scale instead of |tau|, so a
    numerically harmonic map is numerically biharmonic as well.

    Returns ``(s_tau, s_tau2, d2)``; compare ``max_i |d2_i v_i|`` with them.
    """
    f = float
    d1 = [math.sqrt(f(p.src.metric.gram[i][i])) for i in la.RANGE]
    d2 = [math.sqrt(f(p.dst.metric.gram[i][i])) for i in la.RANGE]
    A, c = p.dst.product.A, p.dst.algebra.c
    r3 = [(i, j, k) for i in la.RANGE for j in la.RANGE for k in la.RANGE]
    b = max(abs(f(A[i][j][k])) * d2[k] / (d2[i] * d2[j]) for i, j, k in r3)
    cb = max(abs(f(c[i][j][k])) * d2[k] / (d2[i] * d2[j]) for i, j, k in r3)
    m = max(abs(f(p.xi.m[i][j])) * d2[i] / d1[j] for i in la.RANGE for j in la.RANGE)
    ginv = p.src.gram_inverse
    g = sum(abs(f(ginv[j][k])) * d1[j] * d1[k] for j in la.RANGE for k in la.RANGE)
    uvec = unimodular_vector_contracted(p.src)
    u = max(abs(f(uvec[k])) * d1[k] for k in la.RANGE)
    s_tau = b * g * m * m + m * u
    s_tau2 = s_tau * (3 * b * b * g * m * m + b * cb * g * m * m + b * m * u)
    return s_tau, s_tau2, tuple(d2)


def bitension_operator(p: Problem):
    """Matrix ``L`` with ``tau2 = L tau``: the bitension is linear in tau for fixed xi."""
    _, one = _images(p)
    cols = [_tau2_acc(p, la.basis(k, one)).total for k in la.RANGE]
    return la.transpose(cols)


def _operator_norm(L, w):
    # infinity norm of diag(w) L diag(w)^-1
    return max(sum(abs(float(L[i][k])) * w[i] / w[k] for k in la.RANGE) for i in la.RANGE)


def _weighted(v, w):
    return tuple(x * wi for x, wi in zip(v, w)) if w is not None else v


def analyze(p: Problem, tol: float = DEFAULT_TOL, with_frame: bool = False) -> TensionReport:
    """Tension, bitension and test matrix with harmonic/biharmonic verdicts.

    On the float path a field counts as zero when its largest normalised
    entry is at most ``tol`` times the natural scale from
    :func:`field_scales`.  On the rational path the test is exact.
    """
    if not tol > 0:
        raise InvalidInput("tolerance must be positive")
    ta = _tau_acc(p)
    t2a = _tau2_acc(p, ta.total)
    m, d = test_matrix(p)
    exact = p.exact
    frame_exact = p.src.frame.exact if with_frame else None
    s_tau, s_tau2, w = field_scales(p)
    harmonic = is_zero(_weighted(ta.total, w), s_tau, tol, exact)
    if exact:
        biharmonic = is_zero(t2a.total, 0, tol, True)
    else:
        # tau2 = L tau, so measure tau2 against |L| |tau|: near the harmonic
        # set both shrink together and only the ratio is informative.
        # A numerically harmonic map is numerically biharmonic.
        lnorm = _operator_norm(bitension_operator(p), w)
        t_size = max(la.max_abs(_weighted(ta.total, w)), tol * s_tau) if not harmonic else s_tau
        s_tau2 = lnorm * t_size
        biharmonic = harmonic or is_zero(_weighted(t2a.total, w), s_tau2, tol, False)
    return TensionReport(
        tau=ta.total, tau2=t2a.total, test_matrix=m, det_test=d,
        harmonic=harmonic, biharmonic=biharmonic,
        tolerance_used=tol, arithmetic_path=p.arithmetic_path,
        tau_scale=s_tau, tau2_scale=s_tau2, det_scale=det_scale(m),
        frame_exact=frame_exact, weights=w)
