"""Left-invariant metrics as Gram matrices in the basis (X1, X2, X3)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from . import linalg3 as la
from .errors import DegenerateMetric, ParamOutOfRange

FRAME_TOL = 1e-12


def _cholesky_upper(g, exact: bool):
    """Upper triangular ``R`` with ``Rᵀ R = g``.

    On exact input the square roots are taken exactly when they exist; the
    first irrational root switches the remainder of the factorisation to
    floats. Returns ``(R, stayed_exact)``.
    """
    r = [[g[0][0] * 0] * 3 for _ in la.RANGE]

    def root(x):
        nonlocal exact
        if x <= 0:
            raise DegenerateMetric(f"Gram matrix is not positive definite (pivot {x})")
        if exact:
            s = la.exact_sqrt(x)
            if s is not None:
                return s
            exact = False
        return math.sqrt(x)

    for i in la.RANGE:
        s = g[i][i] - sum(r[k][i] * r[k][i] for k in range(i))
        r[i][i] = root(s)
        for j in range(i + 1, 3):
            r[i][j] = (g[i][j] - sum(r[k][i] * r[k][j] for k in range(i))) / r[i][i]
    return la.mat(r), exact


def _leading_minors(g):
    return (g[0][0], g[0][0] * g[1][1] - g[0][1] * g[1][0], la.det(g))


@dataclass(frozen=True)
class Metric:
    """Symmetric positive definite Gram matrix ``gram[i][j] = <X_i, X_j>``."""

    gram: tuple

    def __post_init__(self):
        g = la.mat(self.gram)
        if la.is_exact(g):
            g = la.to_fraction(g)
        object.__setattr__(self, "gram", g)
        if any(g[i][j] != g[j][i] for i in la.RANGE for j in la.RANGE):
            raise DegenerateMetric("Gram matrix is not symmetric")
        if la.is_exact(g):
            minors = _leading_minors(g)
            if not all(m > 0 for m in minors):
                raise DegenerateMetric(f"Gram matrix is not positive definite (leading minors {', '.join(str(m) for m in minors)})")
        else:
            if not all(math.isfinite(x) for row in g for x in row):
                raise DegenerateMetric("Gram matrix has non-finite entries")
            _cholesky_upper(g, exact=False)

    @classmethod
    def diag(cls, a, b, c) -> "Metric":
        z = a * 0
        return cls(((a, z, z), (z, b, z), (z, z, c)))

    @property
    def exact(self) -> bool:
        return la.is_exact(self.gram)

    def inner(self, u, v):
        return la.dot(u, la.matvec(self.gram, v))

    def inverse(self):
        return la.inverse(self.gram)

    def to_float(self) -> "Metric":
        return Metric(la.to_float(self.gram))

    def to_fraction(self) -> "Metric":
        return Metric(la.to_fraction(self.gram))


@dataclass(frozen=True)
class OrthonormalFrame:
    """Columns of ``cols`` are the (X1, X2, X3) coordinates of e1, e2, e3."""

    cols: tuple
    exact: bool

    def vectors(self):
        return [la.column(self.cols, j) for j in la.RANGE]


def orthonormal_frame(m: Metric) -> OrthonormalFrame:
    """Cholesky frame ``E = R⁻¹`` where ``G = Rᵀ R``.

    Exact when every pivot of the factorisation is a rational square, which
    covers e.g. ``diag(4, 1, 1)``; otherwise the frame is built in floats and
    ``exact`` is False.
    """
    r, exact = _cholesky_upper(m.gram, exact=m.exact)
    if not exact:
        r = la.to_float(r)
    e = la.inverse(r)
    return OrthonormalFrame(e, exact)


def frame_residual(m: Metric, frame: OrthonormalFrame):
    """``max |Eᵀ G E - I|``."""
    e = frame.cols
    gram = m.gram if frame.exact else la.to_float(m.gram)
    prod = la.matmul(la.matmul(la.transpose(e), gram), e)
    return la.max_abs(la.mat_sub(prod, la.identity(prod[0][0] * 0 + 1)))


def adjoint_map(m_src: Metric, m_dst: Metric, lin):
    """Adjoint of ``lin: (src) -> (dst)``: ``G_src⁻¹ linᵀ G_dst``.

    Characterised by ``<L* u, v>_src = <u, L v>_dst``.
    """
    return la.solve(m_src.gram, la.matmul(la.transpose(lin), m_dst.gram))


def _require(cond: bool, family: str, text: str):
    if not cond:
        raise ParamOutOfRange(f"{family}: constraint {text} violated")


def _get(params: Mapping, family: str, *names):
    out = []
    for n in names:
        if n not in params:
            raise ParamOutOfRange(f"{family}: missing parameter {n!r}")
        out.append(params[n])
    return out


# family -> (parameter names, description of constraint)
METRIC_FAMILIES = {
    "nil": (("lambda",), "lambda > 0"),
    "e02": (("mu", "nu"), "0 < mu <= 1, nu > 0"),
    "sol-diag": (("nu",), "nu > 0"),
    "sol": (("mu", "nu"), "mu > 1, nu > 0"),
    "su2": (("lambda", "mu", "nu"), "0 < nu <= mu <= lambda"),
    "sl2": (("lambda", "mu", "nu"), "0 < lambda <= mu, nu > 0"),
    "diag": (("lambda", "mu", "nu"), "lambda, mu, nu > 0"),
}


def metric_family(family: str, params: Mapping) -> Metric:
    """Gram matrix of a named metric family.

    ``nil``: diag(l, l, 1); ``e02``: diag(1, mu, nu); ``sol-diag``:
    diag(1, 1, nu); ``sol``: [[1, 1, 0], [1, mu, 0], [0, 0, nu]];
    ``su2``/``sl2``/``diag``: diag(l, mu, nu) under the respective ordering.
    """
    if family not in METRIC_FAMILIES:
        raise ParamOutOfRange(f"unknown metric family {family!r}")
    names, text = METRIC_FAMILIES[family]
    vals = _get(params, family, *names)
    one = vals[0] * 0 + 1
    if family == "nil":
        (lam,) = vals
        _require(lam > 0, family, text)
        return Metric.diag(lam, lam, one)
    if family == "e02":
        mu, nu = vals
        _require(0 < mu <= 1 and nu > 0, family, text)
        return Metric.diag(one, mu, nu)
    if family == "sol-diag":
        (nu,) = vals
        _require(nu > 0, family, text)
        return Metric.diag(one, one, nu)
    if family == "sol":
        mu, nu = vals
        _require(mu > 1 and nu > 0, family, text)
        z = one * 0
        return Metric(((one, one, z), (one, mu, z), (z, z, nu)))
    lam, mu, nu = vals
    if family == "su2":
        _require(0 < nu <= mu <= lam, family, text)
    elif family == "sl2":
        _require(0 < lam <= mu and nu > 0, family, text)
    else:
        _require(lam > 0 and mu > 0 and nu > 0, family, text)
    return Metric.diag(lam, mu, nu)


# sampling boxes for sweeps: unbounded ranges are truncated to (0, 10]
# and (1, 10] for "mu > 1" style constraints
POS_MAX = 10.0


def _draw(rng, low, high, exact, denominator=64):
    if exact:
        lo = math.floor(low * denominator) + 1  # open at the low end
        hi = math.floor(high * denominator)
        return la.Q(rng.randint(lo, hi), denominator)
    x = rng.uniform(low, high)
    while x <= low:
        x = rng.uniform(low, high)
    return x


def sample_metric_params(family: str, rng, exact: bool = False, suffix: str = "") -> dict:
    """Uniform draw inside a metric family's (truncated) parameter box."""
    if family not in METRIC_FAMILIES:
        raise ParamOutOfRange(f"unknown metric family {family!r}")
    d = lambda lo=0.0, hi=POS_MAX: _draw(rng, lo, hi, exact)
    if family == "nil":
        p = {"lambda": d()}
    elif family == "e02":
        p = {"mu": d(0.0, 1.0), "nu": d()}
    elif family == "sol-diag":
        p = {"nu": d()}
    elif family == "sol":
        p = {"mu": d(1.0), "nu": d()}
    elif family == "su2":
        nu, mu, lam = sorted([d(), d(), d()])
        p = {"lambda": lam, "mu": mu, "nu": nu}
    elif family == "sl2":
        lam, mu = sorted([d(), d()])
        p = {"lambda": lam, "mu": mu, "nu": d()}
    else:
        p = {"lambda": d(), "mu": d(), "nu": d()}
    return {k + suffix: v for k, v in p.items()}


def metric_from(family: str, params: Mapping, suffix: str = "") -> Metric:
    """``metric_family`` reading parameters named ``lambda<suffix>`` etc."""
    names = METRIC_FAMILIES[family][0] if family in METRIC_FAMILIES else ()
    return metric_family(family, {n: params[n + suffix] for n in names if n + suffix in params})
