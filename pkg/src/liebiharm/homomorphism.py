"""Lie algebra homomorphisms as 3x3 matrices and the parameterised catalogs.

Matrices act on column coordinates: column ``j`` of ``m`` is the image of
``X_j``. Family matrices are written row by row exactly as displayed in the
classification tables.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

from . import linalg3 as la
from .algebra_core import LieAlgebra, bracket, catalog
from .errors import NotAutomorphism, NotHomomorphism, ParamOutOfRange, Singular
from .metric_space import Metric

VALIDATE_TOL = 1e-12
GAMMA_EXCLUSION = 1e-9


@dataclass(frozen=True)
class Homomorphism:
    src: LieAlgebra
    dst: LieAlgebra
    m: tuple

    def __post_init__(self):
        m = la.mat(self.m)
        if la.is_exact(m):
            m = la.to_fraction(m)
        object.__setattr__(self, "m", m)

    def __call__(self, v):
        return la.matvec(self.m, v)

    @property
    def exact(self) -> bool:
        return la.is_exact(self.m)


def bracket_residual(h: Homomorphism) -> Tuple[float, float]:
    """Return ``(residual, scale)`` for ``m[X_i,X_j] - [m X_i, m X_j]``, i < j.

    ``residual`` is the largest absolute entry over the nine scalar
    equations; ``scale`` bounds the intermediate products, ``max|m|²``.
    """
    one = h.m[0][0] * 0 + 1
    e = [la.basis(i, one) for i in la.RANGE]
    cols = [h(x) for x in e]
    worst, size = 0, 0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        lhs = h(bracket(h.src, e[i], e[j]))
        rhs = bracket(h.dst, cols[i], cols[j])
        worst = max(worst, la.max_abs(la.sub(lhs, rhs)))
    size = max(la.max_abs(h.m) ** 2, la.max_abs(h.m))
    return worst, size


def validate(h: Homomorphism, tol: float = VALIDATE_TOL) -> bool:
    """Bracket compatibility: exact on rationals, relative ``tol`` on floats."""
    residual, size = bracket_residual(h)
    if h.exact:
        return residual == 0
    return residual <= tol * max(1.0, size)


def require_homomorphism(h: Homomorphism, tol: float = VALIDATE_TOL) -> Homomorphism:
    if not validate(h, tol):
        residual, _ = bracket_residual(h)
        raise NotHomomorphism(f"bracket compatibility residual {float(residual):.3e}")
    return h


def conjugate(h: Homomorphism, phi1, phi2, metric1: Metric, metric2: Metric,
              tol: float = VALIDATE_TOL):
    """Return ``(phi2 ∘ h ∘ phi1⁻¹, metric1', metric2')``.

    The new metrics are pushed forward so that ``phi_i: (g, metric_i) ->
    (g, metric_i')`` are isometries: ``G' = phi⁻ᵀ G phi⁻¹``.
    """
    phi1, phi2 = la.mat(phi1), la.mat(phi2)
    for phi, g in ((phi1, h.src), (phi2, h.dst)):
        if la.det(phi) == 0:
            raise Singular("automorphism matrix is singular")
        if not validate(Homomorphism(g, g, phi), tol):
            raise NotAutomorphism(f"matrix does not preserve the {g.id} bracket")
    inv1, inv2 = la.inverse(phi1), la.inverse(phi2)
    m = la.matmul(la.matmul(phi2, h.m), inv1)
    g1 = la.matmul(la.matmul(la.transpose(inv1), metric1.gram), inv1)
    g2 = la.matmul(la.matmul(la.transpose(inv2), metric2.gram), inv2)
    # symmetrise away float round-off so the Metric invariant holds exactly
    sym = lambda g: tuple(tuple((g[i][j] + g[j][i]) / 2 for j in la.RANGE) for i in la.RANGE)
    return Homomorphism(h.src, h.dst, m), Metric(sym(g1)), Metric(sym(g2))


# ---------------------------------------------------------------------------
# parameterised families


@dataclass(frozen=True)
class Param:
    name: str
    low: float
    high: float
    exact_ok: bool = True  # may be drawn as a rational


@dataclass(frozen=True)
class FamilySpec:
    name: str
    algebra: str
    params: Tuple[Param, ...]
    build: Callable[[Mapping], tuple] = field(repr=False, compare=False)
    check: Optional[Callable[[Mapping], Optional[str]]] = field(default=None, repr=False, compare=False)
    transcendental: bool = False

    @property
    def param_names(self):
        return tuple(p.name for p in self.params)


def _rot_xy(a):
    c, s = math.cos(a), math.sin(a)
    return ((c, s, 0.0), (-s, c, 0.0), (0.0, 0.0, 1.0))


def _rot_xz(a):
    c, s = math.cos(a), math.sin(a)
    return ((c, 0.0, s), (0.0, 1.0, 0.0), (-s, 0.0, c))


def _rot_yz(a):
    c, s = math.cos(a), math.sin(a)
    return ((1.0, 0.0, 0.0), (0.0, c, s), (0.0, -s, c))


def _boost_xz(a):
    c, s = math.cosh(a), math.sinh(a)
    return ((c, 0.0, s), (0.0, 1.0, 0.0), (s, 0.0, c))


def _boost_yz(a):
    c, s = math.cosh(a), math.sinh(a)
    return ((1.0, 0.0, 0.0), (0.0, c, s), (0.0, s, c))


rot_xy, rot_xz, rot_yz, boost_xz, boost_yz = _rot_xy, _rot_xz, _rot_yz, _boost_xz, _boost_yz

# single factors xi_1, xi_2, xi_3 as numbered in the su(2) and sl(2,R) sections
FACTORS = {
    "su2": {1: _rot_yz, 2: _rot_xz, 3: _rot_xy},
    "sl2": {1: _boost_yz, 2: _boost_xz, 3: _rot_xy},
}


def _gamma_check(p):
    g = p["gamma"]
    one = g * 0 + 1
    if la.is_exact(g):
        return None if g * g != one else "gamma^2 != 1"
    return None if abs(g * g - 1) > GAMMA_EXCLUSION else "|gamma^2 - 1| > 1e-9"


def _nil(p):
    a1, a2, b1, b2, a3, b3 = (p[k] for k in ("alpha1", "alpha2", "beta1", "beta2", "alpha3", "beta3"))
    z = a1 * 0
    return ((a1, a2, z), (b1, b2, z), (a3, b3, a1 * b2 - a2 * b1))


def _xi1(p):
    a, b, g = p["a"], p["b"], p["gamma"]
    z = a * 0
    return ((z, z, a), (z, z, b), (z, z, g))


def _e02_xi2(p):
    al, be, a, b = p["alpha"], p["beta"], p["a"], p["b"]
    z, one = a * 0, a * 0 + 1
    return ((al, -be, a), (be, al, b), (z, z, one))


def _e02_xi3(p):
    al, be, a, b = p["alpha"], p["beta"], p["a"], p["b"]
    z, one = a * 0, a * 0 + 1
    return ((al, be, a), (be, -al, b), (z, z, -one))


def _sol_xi2(p):
    al, be, a, b = p["alpha"], p["beta"], p["a"], p["b"]
    z, one = a * 0, a * 0 + 1
    return ((al, z, a), (z, be, b), (z, z, one))


def _sol_xi3(p):
    al, be, a, b = p["alpha"], p["beta"], p["a"], p["b"]
    z, one = a * 0, a * 0 + 1
    return ((z, be, a), (al, z, b), (z, z, -one))


def _product(alg):
    f = FACTORS[alg]

    def build(p):
        return la.matmul(la.matmul(f[3](p["a"]), f[2](p["b"])), f[1](p["c"]))
    return build


def _single(alg, k):
    def build(p):
        return f(p["a"])
    f = FACTORS[alg][k]
    return build


R = 10.0
ANGLE = math.pi


def _real(*names):
    return tuple(Param(n, -R, R) for n in names)


def _angles(*names):
    return tuple(Param(n, -ANGLE, ANGLE, exact_ok=False) for n in names)


def _boosts(*names):
    return tuple(Param(n, -R, R, exact_ok=False) for n in names)


FAMILIES: Dict[str, FamilySpec] = {}


def _register(spec: FamilySpec):
    FAMILIES[spec.name] = spec


_register(FamilySpec("nil-generic", "nil", _real("alpha1", "alpha2", "beta1", "beta2", "alpha3", "beta3"), _nil))
_register(FamilySpec("e02-xi1", "e02", _real("a", "b", "gamma"), _xi1, _gamma_check))
_register(FamilySpec("e02-xi2", "e02", _real("alpha", "beta", "a", "b"), _e02_xi2))
_register(FamilySpec("e02-xi3", "e02", _real("alpha", "beta", "a", "b"), _e02_xi3))
_register(FamilySpec("sol-xi1", "sol", _real("a", "b", "gamma"), _xi1, _gamma_check))
_register(FamilySpec("sol-xi2", "sol", _real("alpha", "beta", "a", "b"), _sol_xi2))
_register(FamilySpec("sol-xi3", "sol", _real("alpha", "beta", "a", "b"), _sol_xi3))
for _k in (1, 2, 3):
    _register(FamilySpec(f"su2-xi{_k}", "su2", _angles("a"), _single("su2", _k), transcendental=True))
    _register(FamilySpec(f"sl2-xi{_k}", "sl2", (_angles if _k == 3 else _boosts)("a"),
                         _single("sl2", _k), transcendental=True))
_register(FamilySpec("su2-xi3xi2xi1", "su2", _angles("a", "b", "c"), _product("su2"), transcendental=True))
_register(FamilySpec("sl2-xi3xi2xi1", "sl2", _angles("a") + _boosts("b", "c"), _product("sl2"), transcendental=True))


def family(name: str) -> FamilySpec:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ParamOutOfRange(f"unknown homomorphism family {name!r}") from None


def normalize_params(params: Mapping) -> Dict:
    """Integers and rationals become ``la.Q`` so exact arithmetic stays exact."""
    return {k: la.Q(v) if la.is_exact(v) else v for k, v in params.items()}


def check_params(f: FamilySpec, params: Mapping) -> None:
    missing = [n for n in f.param_names if n not in params]
    if missing:
        raise ParamOutOfRange(f"{f.name}: missing parameters {missing}")
    for p in f.params:
        v = params[p.name]
        if isinstance(v, float) and not math.isfinite(v):
            raise ParamOutOfRange(f"{f.name}: {p.name} is not finite")
    if f.check is not None:
        msg = f.check(params)
        if msg:
            raise ParamOutOfRange(f"{f.name}: constraint {msg} violated")


def instantiate(f: FamilySpec | str, params: Mapping, validate_result: bool = True) -> Homomorphism:
    """Build the family matrix at ``params``; the result is bracket-validated."""
    if isinstance(f, str):
        f = family(f)
    params = normalize_params(params)
    check_params(f, params)
    g = catalog(f.algebra)
    m = f.build(params)
    h = Homomorphism(g, g, m)
    if validate_result:
        require_homomorphism(h)
    return h


def random_value(rng: random.Random, low, high, exact: bool, denominator: int = 64):
    """Uniform draw; on the exact path a rational with the given denominator."""
    if exact:
        lo = math.ceil(low * denominator)
        hi = math.floor(high * denominator)
        return la.Q(rng.randint(lo, hi), denominator)
    return rng.uniform(low, high)


def sample_params(f: FamilySpec, rng: random.Random, exact: bool = False) -> Dict:
    """Uniform draw over the declared boxes, rejecting excluded values."""
    exact = exact and not f.transcendental
    for _ in range(1000):
        p = {q.name: random_value(rng, q.low, q.high, exact and q.exact_ok) for q in f.params}
        if f.check is None or not f.check(p):
            return p
    raise ParamOutOfRange(f"{f.name}: could not sample admissible parameters")


def random_automorphism(alg: str, rng: random.Random, exact: bool = False):
    """A random invertible bracket-preserving matrix of the named algebra."""
    for _ in range(1000):
        if alg == "nil":
            m = _nil(sample_params(FAMILIES["nil-generic"], rng, exact))
        elif alg in ("e02", "sol"):
            fam = FAMILIES[f"{alg}-xi{rng.choice((2, 3))}"]
            m = fam.build(sample_params(fam, rng, exact))
        elif alg in ("su2", "sl2"):
            fam = FAMILIES[f"{alg}-xi3xi2xi1"]
            p = {q.name: rng.uniform(q.low, q.high) if alg == "su2" or q.name == "a" else rng.uniform(-2.0, 2.0)
                 for q in fam.params}
            m = fam.build(p)
        else:
            raise ParamOutOfRange(f"unknown algebra {alg!r}")
        d = la.det(m)
        if (d != 0) if la.is_exact(m) else abs(d) > 1e-3:
            return la.to_fraction(m) if la.is_exact(m) else m
    raise Singular("could not draw an invertible automorphism")
