"""Derivative-free minimisation of |tau|^2 and |tau2|^2 over family parameters.

A plain Nelder-Mead simplex (reflection 1, expansion 2, contraction 1/2,
shrink 1/2) with random restarts inside a box.  Squared norms are taken in
the target metric, ``<v, v>_G2``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

from . import linalg3 as la
from .algebra_core import catalog
from .connection import MetricLieAlgebra
from .errors import InvalidInput, LieHarmError, NoFreeParams, ParamOutOfRange
from .homomorphism import Homomorphism, family, instantiate
from .metric_space import METRIC_FAMILIES, Metric, metric_from
from .tension import Problem, analyze, tau, tau2

OBJECTIVES = ("tension_norm_sq", "bitension_norm_sq")
DEFAULT_TOL = 1e-12
DIAMETER_TOL = 1e-10
SCAN_FACTOR = 1e3
# witnesses must be clearly non-harmonic: relative tension residual above this
WITNESS_SEPARATION = 1e-3


@dataclass(frozen=True)
class SearchSpec:
    family: str
    metrics: Tuple[str, str]
    fixed: Mapping[str, float]
    free: Mapping[str, Tuple[float, float]]
    objective: str = "bitension_norm_sq"
    tolerance: float = DEFAULT_TOL
    max_evals: int = 20000
    restarts: int = 20

    def __post_init__(self):
        if not self.free:
            raise NoFreeParams("search needs at least one free parameter")
        if self.objective not in OBJECTIVES:
            raise InvalidInput(f"unknown objective {self.objective!r}")
        for name, (lo, hi) in self.free.items():
            if not lo < hi:
                raise InvalidInput(f"empty box for {name!r}: ({lo}, {hi})")
        both = set(self.free) & set(self.fixed)
        if both:
            raise InvalidInput(f"parameters both fixed and free: {sorted(both)}")
        if not self.tolerance > 0 or self.max_evals < 1 or self.restarts < 1:
            raise InvalidInput("tolerance, max_evals and restarts must be positive")
        missing = [n for n in self.required_names() if n not in self.free and n not in self.fixed]
        if missing:
            raise InvalidInput(f"parameters neither fixed nor free: {missing}")

    def required_names(self) -> List[str]:
        names = list(family(self.family).param_names)
        for fam, suffix in zip(self.metrics, ("1", "2")):
            if fam not in METRIC_FAMILIES:
                raise ParamOutOfRange(f"unknown metric family {fam!r}")
            names += [n + suffix for n in METRIC_FAMILIES[fam][0]]
        return names

    @property
    def free_names(self) -> Tuple[str, ...]:
        return tuple(self.free)

    def params(self, x) -> Dict[str, float]:
        p = dict(self.fixed)
        p.update(zip(self.free_names, x))
        return p

    @classmethod
    def from_json(cls, d: Mapping) -> "SearchSpec":
        try:
            return cls(family=d["family"], metrics=tuple(d["metrics"]), fixed=dict(d.get("fixed", {})),
                       free={k: tuple(v) for k, v in d.get("free", {}).items()},
                       objective=d.get("objective", "bitension_norm_sq"),
                       tolerance=float(d.get("tolerance", DEFAULT_TOL)),
                       max_evals=int(d.get("max_evals", 20000)), restarts=int(d.get("restarts", 20)))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, LieHarmError):
                raise
            raise InvalidInput(f"bad search spec: {e}") from None


@dataclass
class SearchResult:
    params: Dict[str, float]
    value: float
    evals: int
    converged: bool
    tension_norm_sq: Optional[float] = None

    def to_json(self) -> dict:
        return {"params": self.params, "value": self.value, "evals": self.evals,
                "converged": self.converged, "tension_norm_sq": self.tension_norm_sq}


def _norm_sq(v, gram) -> float:
    return float(sum(v[i] * gram[i][j] * v[j] for i in la.RANGE for j in la.RANGE))


@lru_cache(maxsize=512)
def _metric_side(alg: str, gram) -> MetricLieAlgebra:
    # metrics are usually fixed during a search; reuse their Levi-Civita data
    return MetricLieAlgebra(catalog(alg), Metric(gram))


def problem_at(spec: SearchSpec, params: Mapping) -> Problem:
    fam = family(spec.family)
    h = instantiate(fam, {k: float(params[k]) for k in fam.param_names}, validate_result=False)
    g1 = la.to_float(metric_from(spec.metrics[0], params, "1").gram)
    g2 = la.to_float(metric_from(spec.metrics[1], params, "2").gram)
    alg = catalog(fam.algebra)
    return Problem(_metric_side(fam.algebra, g1), _metric_side(fam.algebra, g2),
                   Homomorphism(alg, alg, la.to_float(h.m)))


def evaluate(spec: SearchSpec, params: Mapping, objective: Optional[str] = None) -> float:
    """Objective value at a full parameter assignment."""
    p = problem_at(spec, params)
    f = tau if (objective or spec.objective) == "tension_norm_sq" else tau2
    return _norm_sq(f(p), p.dst.metric.gram)


class _Budget:
    def __init__(self, spec: SearchSpec):
        self.spec, self.evals = spec, 0

    @property
    def left(self) -> bool:
        return self.evals < self.spec.max_evals

    def __call__(self, x) -> float:
        self.evals += 1
        return evaluate(self.spec, self.spec.params(x))


def _clip(x, boxes):
    return [min(max(v, lo), hi) for v, (lo, hi) in zip(x, boxes)]


def _diameter(simplex) -> float:
    x0 = simplex[0][1]
    return max(math.dist(x0, x) for _, x in simplex[1:])


def nelder_mead(f: _Budget, x0, boxes, tol: float):
    """One simplex run from ``x0``; stops on an exact zero, a collapsed simplex or the budget."""
    n = len(x0)
    v0 = f(x0)
    simplex = [(v0, list(x0))]
    if v0 == 0:
        return v0, list(x0)
    for i in range(n):
        x = list(x0)
        lo, hi = boxes[i]
        step = 0.05 * (hi - lo)
        x[i] = x[i] + step if x[i] + step <= hi else x[i] - step
        simplex.append((f(x), x))
    while f.left:
        simplex.sort(key=lambda t: t[0])
        if simplex[0][0] == 0 or _diameter(simplex) < DIAMETER_TOL:
            break
        best, worst = simplex[0], simplex[-1]
        centroid = [sum(x[i] for _, x in simplex[:-1]) / n for i in range(n)]
        point = lambda t: _clip([c + t * (c - w) for c, w in zip(centroid, worst[1])], boxes)
        xr = point(1.0)
        fr = f(xr)
        if fr < best[0]:
            xe = point(2.0)
            fe = f(xe)
            simplex[-1] = (fe, xe) if fe < fr else (fr, xr)
        elif fr < simplex[-2][0]:
            simplex[-1] = (fr, xr)
        else:
            xc = point(0.5) if fr < worst[0] else point(-0.5)
            fc = f(xc)
            if fc < min(fr, worst[0]):
                simplex[-1] = (fc, xc)
            else:
                bx = best[1]
                simplex = [best] + [(f(x), x) for x in
                                    ([b + 0.5 * (xi - b) for b, xi in zip(bx, x)] for _, x in simplex[1:])]
    simplex.sort(key=lambda t: t[0])
    return simplex[0]


def _start(spec: SearchSpec, rng: random.Random):
    return [rng.uniform(lo, hi) for lo, hi in spec.free.values()]


def _result(spec: SearchSpec, value, x, evals) -> SearchResult:
    p = spec.params(x)
    return SearchResult(params=p, value=value, evals=evals, converged=value < spec.tolerance,
                        tension_norm_sq=evaluate(spec, p, "tension_norm_sq"))


def minimize(spec: SearchSpec, seed: int = 0, start=None) -> SearchResult:
    """Simplex descent with up to ``spec.restarts`` random starts.

    Each run continues past the tolerance until the simplex collapses, so a
    converged point is polished well beyond ``tolerance``.  The first start
    is ``start`` when given.  If the budget runs out the best point so far
    is returned with ``converged=False``.
    """
    rng = random.Random(f"{seed}:{spec.family}:{spec.objective}")
    boxes = list(spec.free.values())
    f = _Budget(spec)
    best = None
    for k in range(spec.restarts):
        x0 = list(start) if (k == 0 and start is not None) else _start(spec, rng)
        v, x = nelder_mead(f, x0, boxes, spec.tolerance)
        if best is None or v < best[0]:
            best = (v, x)
        if best[0] < spec.tolerance or not f.left:
            break
    return _result(spec, best[0], best[1], f.evals)


def scan_biharmonic_not_harmonic(spec: SearchSpec, n: int = 20, seed: int = 0) -> List[SearchResult]:
    """Minimise |tau2|^2 from ``n`` random starts and keep converged non-harmonic points.

    A point is kept when additionally |tau|^2 > 1e3 * tolerance and the
    tension module, re-run at the point, calls it biharmonic and not
    harmonic with a relative tension residual above ``WITNESS_SEPARATION``.
    Near a harmonic map tau2 can shrink faster than tau (on nil roughly as
    the cube of the distance against its first power), so without that
    separation a point just outside the harmonic set passes both absolute
    tests.  Results are sorted by objective value, then parameters.
    """
    if n < 1:
        raise InvalidInput("n must be at least 1")
    s = SearchSpec(spec.family, spec.metrics, spec.fixed, spec.free, "bitension_norm_sq",
                   spec.tolerance, spec.max_evals, 1)
    rng = random.Random(f"{seed}:{spec.family}:scan")
    boxes = list(s.free.values())
    out = []
    for _ in range(n):
        f = _Budget(s)
        v, x = nelder_mead(f, _start(s, rng), boxes, s.tolerance)
        r = _result(s, v, x, f.evals)
        if r.converged and r.tension_norm_sq > SCAN_FACTOR * s.tolerance:
            rep = analyze(problem_at(s, r.params))
            if rep.biharmonic and not rep.harmonic and rep.tau_residual > WITNESS_SEPARATION:
                out.append(r)
    out.sort(key=lambda r: (r.value, sorted(r.params.items())))
    return out
