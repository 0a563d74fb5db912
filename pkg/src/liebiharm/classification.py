"""Classification statements encoded as samplable predicates, and sweeps over them.

A :class:`TheoremCase` names a homomorphism family, the metric families on both
sides, a *setting* (standing hypotheses such as an ordering of metric
eigenvalues), a *branch* condition and the verdict the branch is claimed to
force.  :func:`verify_case` checks the verdict on points built to satisfy the
branch (soundness) and checks that generic points of the setting, kept away
from every branch of the same statement, do not carry the verdict
(completeness, statistically).

Some statements are known to be misprinted.  Those readings are kept as cases
with ``expect="refuted"`` next to a corrected case, so a sweep reports both
and discriminates them instead of silently picking one.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import linalg3 as la
from .errors import SamplingInfeasible
from .homomorphism import FAMILIES, family, instantiate, random_value, sample_params
from .metric_space import metric_from, sample_metric_params
from .tension import DEFAULT_TOL, TensionReport, analyze, make_problem

HARMONIC = "harmonic"
BNH = "biharmonic-not-harmonic"
EQUIV = "biharmonic-iff-harmonic"
VERDICTS = (HARMONIC, BNH, EQUIV)

MARGIN = 1e-3
CONDITION_TOL = 1e-9
MAX_TRIES = 200

cos, sin, sqrt = math.cos, math.sin, math.sqrt


class Ctx:
    """Evaluation context for branch predicates.

    ``eq(x)`` tests ``x = 0`` within ``tol`` (exactly when ``tol == 0``).
    ``ne(x)`` tests ``x != 0``; with ``relax`` it always holds, which turns a
    branch into a superset used to discard generic points near its closure.
    """

    def __init__(self, tol: float = 0.0, relax: bool = False):
        self.tol, self.relax = tol, relax

    def eq(self, *xs) -> bool:
        return all(abs(x) <= self.tol for x in xs)

    def ne(self, x) -> bool:
        return self.relax or abs(x) > self.tol


Params = Dict[str, object]
Predicate = Callable[[Params, Ctx], bool]
Mutator = Callable[[Params, random.Random], None]


@dataclass(frozen=True)
class TheoremCase:
    id: str
    family: str
    metrics: Tuple[str, str]
    expected: str
    condition: Predicate = field(repr=False)
    construct: Optional[Mutator] = field(default=None, repr=False)
    setting: Optional[Mutator] = field(default=None, repr=False)
    group: str = ""
    generic: bool = True
    expect: str = "holds"  # or "refuted" for a misprinted reading
    note: str = ""

    @property
    def algebra(self) -> str:
        return family(self.family).algebra


@dataclass
class SweepResult:
    case_id: str
    expected: str
    expect: str
    n_condition_samples: int
    n_generic_samples: int
    n_discarded: int = 0
    failures: List[Tuple[Tuple, dict]] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.expect == "refuted":
            return bool(self.failures)
        return not self.failures

    def to_json(self) -> dict:
        return {
            "case": self.case_id,
            "expected": self.expected,
            "expect": self.expect,
            "passed": self.passed,
            "n_condition_samples": self.n_condition_samples,
            "n_generic_samples": self.n_generic_samples,
            "n_discarded": self.n_discarded,
            "n_failures": len(self.failures),
            "failures": [{"params": dict(p), "report": r} for p, r in self.failures[:20]],
            "note": self.note,
        }


# ---------------------------------------------------------------- sampling helpers

def _exact(p: Params) -> bool:
    return all(la.is_exact(v) for v in p.values())


def _zero(*names) -> Mutator:
    def f(p, rng):
        for n in names:
            p[n] = p[n] * 0
    return f


def _set(**values) -> Mutator:
    def f(p, rng):
        for k, v in values.items():
            p[k] = v(p, rng) if callable(v) else (la.Q(v) if _exact(p) and la.is_exact(v) else v)
    return f


def _chain(*fs) -> Mutator:
    def f(p, rng):
        for g in fs:
            if g is not None:
                g(p, rng)
    return f


def _pm(rng) -> int:
    return rng.choice((1, -1))


def _nonzero(p, rng, name, low=0.5, high=5.0):
    """Redraw ``name`` away from zero, keeping the arithmetic path."""
    v = la.Q(rng.randint(int(low * 8), int(high * 8)), 8) if _exact(p) else rng.uniform(low, high)
    p[name] = v * _pm(rng)


def _equal(dst, src, sign=True) -> Mutator:
    def f(p, rng):
        p[dst] = p[src] * (_pm(rng) if sign else 1)
    return f


def _not_one(name) -> Mutator:
    """Keep an e0(2) metric parameter in (0, 1)."""
    def f(p, rng):
        while p[name] >= 1:
            p[name] = p[name] / 2 + (p[name] * 0 + 1) / 4
    return f


def base_sample(c: TheoremCase, rng: random.Random, exact: bool = True) -> Params:
    fam = family(c.family)
    p = sample_params(fam, rng, exact)
    p.update(sample_metric_params(c.metrics[0], rng, exact and not fam.transcendental, "1"))
    p.update(sample_metric_params(c.metrics[1], rng, exact and not fam.transcendental, "2"))
    if fam.algebra == "sl2":
        for k in ("b", "c"):
            if k in p:
                p[k] = rng.uniform(-2.0, 2.0)
        if c.family in ("sl2-xi1", "sl2-xi2"):
            p["a"] = rng.uniform(-2.0, 2.0)
    if c.setting is not None:
        c.setting(p, rng)
    return p


def problem_of(c: TheoremCase, p: Params):
    fam = family(c.family)
    h = instantiate(fam, {k: p[k] for k in fam.param_names})
    return make_problem(fam.algebra, metric_from(c.metrics[0], p, "1"), metric_from(c.metrics[1], p, "2"), h)


def verdict_holds(expected: str, r: TensionReport) -> bool:
    if expected == HARMONIC:
        return r.harmonic
    if expected == BNH:
        return r.biharmonic and not r.harmonic
    return r.harmonic == r.biharmonic


def _key(p: Params) -> Tuple:
    return tuple(sorted((k, float(v)) for k, v in p.items()))


def _record(p: Params, r: TensionReport) -> Tuple[Tuple, dict]:
    return _key(p), r.to_json()


# ---------------------------------------------------------------- generic strata for equivalence sweeps

def special_strata(fam_name: str, metrics: Tuple[str, str]) -> Mutator:
    """Random mixture of degenerate choices so harmonic points are well represented."""
    def f(p, rng):
        if rng.random() < 0.3:
            return
        names = [n for n in family(fam_name).param_names]
        if fam_name == "nil-generic":
            if rng.random() < 0.5:
                _zero("alpha3", "beta3")(p, rng)
            else:
                # second harmonic form: rows of the upper block orthogonal to (alpha3, beta3)
                s, t = p["alpha1"], p["beta1"]
                p["alpha1"], p["alpha2"] = s * p["beta3"], -s * p["alpha3"]
                p["beta1"], p["beta2"] = t * p["beta3"], -t * p["alpha3"]
            return
        for n in names:
            if rng.random() < 0.4:
                p[n] = p[n] * 0
        if "gamma" in p and rng.random() < 0.5:
            p["gamma"] = p["gamma"] * 0
        if rng.random() < 0.4 and "b" in p:
            p["b"] = p["a"] * _pm(rng)
        if rng.random() < 0.4 and "alpha" in p:
            p["beta"] = p["alpha"] * _pm(rng)
        if rng.random() < 0.3:
            # land on a metric relation
            one = p["nu1"] * 0 + 1
            for s in ("1", "2"):
                if ("mu" + s) in p and rng.random() < 0.5:
                    if metrics[int(s) - 1] == "e02":
                        p["mu" + s] = one
                    elif "alpha" in p and p["beta"] != 0 and p["alpha"] ** 2 > p["beta"] ** 2:
                        p["mu" + s] = p["alpha"] ** 2 / p["beta"] ** 2
    return f


# ---------------------------------------------------------------- catalog

CATALOG: List[TheoremCase] = []


def _case(*args, **kw) -> TheoremCase:
    c = TheoremCase(*args, **kw)
    CATALOG.append(c)
    return c


# nilpotent ---------------------------------------------------------------

NIL = ("nil", "nil")
_case("thm3.1", "nil-generic", NIL, HARMONIC,
      lambda p, c: c.eq(p["alpha3"], p["beta3"]),
      _zero("alpha3", "beta3"), group="thm3.1")


def _nil_second(p, rng):
    while p["alpha3"] == 0 and p["beta3"] == 0:
        _nonzero(p, rng, "alpha3")
    s, t = p["alpha1"], p["beta1"]
    p["alpha1"], p["alpha2"] = s * p["beta3"], -s * p["alpha3"]
    p["beta1"], p["beta2"] = t * p["beta3"], -t * p["alpha3"]


_case("thm3.1.2", "nil-generic", NIL, HARMONIC,
      lambda p, c: (c.ne(abs(p["alpha3"]) + abs(p["beta3"]))
                    and c.eq(p["alpha3"] * p["alpha1"] + p["beta3"] * p["alpha2"],
                             p["alpha3"] * p["beta1"] + p["beta3"] * p["beta2"])),
      _nil_second, group="thm3.1")
_case("thm3.1.bi", "nil-generic", NIL, EQUIV, lambda p, c: True,
      special_strata("nil-generic", NIL), generic=False)

# e0(2): harmonic ----------------------------------------------------------

E02 = ("e02", "e02")
_case("thm4.1.1.i", "e02-xi1", E02, HARMONIC,
      lambda p, c: c.ne(p["a"]) and c.ne(p["b"]) and c.eq(p["gamma"], p["mu2"] - 1),
      _chain(lambda p, r: _nonzero(p, r, "a"), lambda p, r: _nonzero(p, r, "b"),
             _zero("gamma"), _set(mu2=1)), group="thm4.1.1")
_case("thm4.1.1.ii", "e02-xi1", E02, HARMONIC,
      lambda p, c: c.ne(abs(p["a"]) + abs(p["b"])) and c.eq(p["a"] * p["b"], p["gamma"]),
      lambda p, rng: _chain(lambda q, r: _nonzero(q, r, "a"), lambda q, r: _nonzero(q, r, "b"),
                            _zero(rng.choice(("a", "b")), "gamma"))(p, rng), group="thm4.1.1")
_case("thm4.1.1.iii", "e02-xi1", E02, HARMONIC,
      lambda p, c: c.eq(p["a"], p["b"]), _zero("a", "b"), group="thm4.1.1")

for _k, _fam in ((2, "e02-xi2"), (3, "e02-xi3")):
    _g = f"thm4.1.{_k}"
    _case(f"{_g}.i", _fam, E02, HARMONIC, lambda p, c: c.eq(p["a"], p["b"], p["alpha"]),
          _zero("a", "b", "alpha"), group=_g)
    _case(f"{_g}.ii", _fam, E02, HARMONIC, lambda p, c: c.eq(p["a"], p["b"], p["beta"]),
          _zero("a", "b", "beta"), group=_g)
    _case(f"{_g}.iii", _fam, E02, HARMONIC, lambda p, c: c.eq(p["a"], p["b"], p["mu1"] - 1),
          _chain(_zero("a", "b"), _set(mu1=1)), group=_g)
    _case(f"{_g}.iv", _fam, E02, HARMONIC, lambda p, c: c.eq(p["a"], p["b"], p["mu2"] - 1),
          _chain(_zero("a", "b"), _set(mu2=1)), group=_g)

# e0(2): biharmonic not harmonic --------------------------------------------


def _cond_421(p, c):
    return c.eq(p["gamma"], p["a"] ** 2 - p["b"] ** 2) and c.ne(p["a"] * p["b"])


_construct_421 = _chain(_zero("gamma"), lambda p, r: _nonzero(p, r, "a"), _equal("b", "a"))
_case("thm4.2.1", "e02-xi1", E02, BNH, _cond_421, _construct_421, setting=_not_one("mu2"),
      group="thm4.2.1", note="target metric restricted to mu2 < 1; at mu2 = 1 the branch is harmonic")
_case("thm4.2.1.mu2=1", "e02-xi1", E02, BNH, _cond_421, _chain(_construct_421, _set(mu2=1)),
      generic=False, expect="refuted",
      note="branch as printed, without mu2 != 1: these points are harmonic")


def _alpha_sq_mu2(p):
    """alpha² on the a = eps*b*mu2*sqrt(mu2) locus."""
    m1, n1, m2, n2, a = (float(p[k]) for k in ("mu1", "nu1", "mu2", "nu2", "a"))
    return m1 * (m2 ** 2 * n2 + a * a * (m2 - 1) ** 2) / (n1 * (m2 - 1) ** 2 * (1 - m1) * m2 * sqrt(m2))


def _alpha_sq_mu1(p):
    """alpha² as printed next to the a = eps*b*mu2*sqrt(mu1) locus."""
    m1, n1, m2, n2, a = (float(p[k]) for k in ("mu1", "nu1", "mu2", "nu2", "a"))
    return sqrt(m1) * (m2 ** 2 * n2 + a * a * (m2 - 1) ** 2) / (m2 * n1 * (m2 - 1) ** 2 * (1 - m1))


def _locus(root: str, alpha_sq):
    def construct(p, rng):
        for k in list(p):
            p[k] = float(p[k])
        _nonzero(p, rng, "b")
        eps = _pm(rng)
        p["a"] = eps * p["b"] * p["mu2"] * sqrt(p[root])
        al = _pm(rng) * sqrt(alpha_sq(p))
        p["alpha"], p["beta"] = al, eps * al

    def cond(p, c):
        if not c.ne(p["b"]):
            return False
        for eps in (1, -1):
            if c.eq(float(p["a"]) - eps * float(p["b"]) * float(p["mu2"]) * sqrt(float(p[root])),
                    float(p["beta"]) - eps * float(p["alpha"]),
                    float(p["alpha"]) ** 2 - alpha_sq(p)):
                return True
        return False
    return construct, cond


def _cond_42i(p, c):
    return c.eq(p["a"], p["b"], p["alpha"] ** 2 - p["beta"] ** 2) and c.ne(p["alpha"] * p["beta"])


_construct_42i = _chain(_zero("a", "b"), lambda p, r: _nonzero(p, r, "alpha"), _equal("beta", "alpha"))
_SETTING_42 = _chain(_not_one("mu1"), _not_one("mu2"))
for _k, _fam in ((2, "e02-xi2"), (3, "e02-xi3")):
    _g = f"thm4.2.{_k}"
    _case(f"{_g}.i", _fam, E02, BNH, _cond_42i, _construct_42i, setting=_SETTING_42, group=_g,
          note="hypothesis read as mu1 != 1, mu2 != 1")
    _case(f"{_g}.i.mu1=1", _fam, E02, BNH, _cond_42i, _chain(_construct_42i, _set(mu1=1)),
          setting=_not_one("mu2"), generic=False, expect="refuted",
          note="hypothesis read literally as mu1 != 0: mu1 = 1 points are harmonic")
    _c2, _p2 = _locus("mu2", _alpha_sq_mu2)
    _case(f"{_g}.ii.sqrt-mu2", _fam, E02, BNH, _p2, _c2, setting=_SETTING_42, group=_g,
          note="locus a = eps*b*mu2*sqrt(mu2), i.e. a² = b²mu2³")
    _c1, _p1 = _locus("mu1", _alpha_sq_mu1)
    _case(f"{_g}.ii.sqrt-mu1", _fam, E02, BNH, _p1, _c1, setting=_SETTING_42, generic=False,
          expect="refuted", note="locus a = eps*b*mu2*sqrt(mu1) with the matching printed alpha²")

# sol: harmonic ------------------------------------------------------------

SOL_PAIRS = {1: ("sol-diag", "sol-diag"), 2: ("sol-diag", "sol"), 3: ("sol", "sol-diag"), 4: ("sol", "sol")}


def _ratio_square(target, num, den, above=1):
    """Set ``target`` = num²/den², redrawing until it exceeds ``above``."""
    def f(p, rng):
        _nonzero(p, rng, den)
        while True:
            _nonzero(p, rng, num, 0.5, 8.0)
            if p[num] ** 2 > above * p[den] ** 2:
                break
        p[target] = p[num] ** 2 / p[den] ** 2
    return f


def _xi1_zero(p, c):
    return c.eq(p["a"], p["b"])


def _xi_all_zero(p, c):
    return c.eq(p["a"], p["b"], p["alpha"], p["beta"])


def _add_sol_xi1(item, second_cond, second_construct):
    g = f"thm5.1.{item}.xi1"
    _case(f"{g}.i", "sol-xi1", SOL_PAIRS[item], HARMONIC, _xi1_zero, _zero("a", "b"), group=g)
    _case(f"{g}.ii", "sol-xi1", SOL_PAIRS[item], HARMONIC, second_cond, second_construct, group=g)


_sol_xi1_diag = (lambda p, c: c.eq(p["gamma"], p["a"] ** 2 - p["b"] ** 2),
                 _chain(_zero("gamma"), _equal("b", "a")))
_sol_xi1_nondiag = (lambda p, c: c.eq(p["gamma"], p["a"] ** 2 - p["mu2"] * p["b"] ** 2),
                    _chain(_zero("gamma"), _ratio_square("mu2", "a", "b")))
_add_sol_xi1(1, *_sol_xi1_diag)
_add_sol_xi1(2, *_sol_xi1_nondiag)
_add_sol_xi1(3, *_sol_xi1_diag)
_add_sol_xi1(4, *_sol_xi1_nondiag)

for _k in (2, 3):
    _fam = f"sol-xi{_k}"
    _g = f"thm5.1.1.xi{_k}"
    _case(f"{_g}.i", _fam, SOL_PAIRS[1], HARMONIC,
          lambda p, c: c.eq(p["a"], p["b"], p["alpha"] ** 2 - p["beta"] ** 2),
          _chain(_zero("a", "b"), _equal("beta", "alpha")), group=_g)

# pairing 2: non-diagonal target
_case("thm5.1.2.xi2.i", "sol-xi2", SOL_PAIRS[2], HARMONIC, _xi_all_zero, _zero("a", "b", "alpha", "beta"),
      group="thm5.1.2.xi2")
_case("thm5.1.2.xi2.ii", "sol-xi2", SOL_PAIRS[2], HARMONIC,
      lambda p, c: c.eq(p["a"], p["b"], p["beta"] ** 2 * p["mu2"] - p["alpha"] ** 2),
      _chain(_zero("a", "b"), _ratio_square("mu2", "alpha", "beta")), group="thm5.1.2.xi2")
_case("thm5.1.2.xi3.i", "sol-xi3", SOL_PAIRS[2], HARMONIC, _xi_all_zero, _zero("a", "b", "alpha", "beta"),
      group="thm5.1.2.xi3")
_case("thm5.1.2.xi3.ii", "sol-xi3", SOL_PAIRS[2], HARMONIC,
      lambda p, c: c.eq(p["a"], p["b"], p["alpha"] ** 2 * p["mu2"] - p["beta"] ** 2),
      _chain(_zero("a", "b"), _ratio_square("mu2", "beta", "alpha")), group="thm5.1.2.xi3",
      note="mu2 = beta²/alpha²")
_case("thm5.1.2.xi3.ii.printed", "sol-xi3", SOL_PAIRS[2], HARMONIC,
      lambda p, c: c.eq(p["a"], p["b"], p["beta"] ** 2 * p["mu2"] - p["alpha"] ** 2),
      _chain(_zero("a", "b"), _ratio_square("mu2", "alpha", "beta")), generic=False, expect="refuted",
      note="mu2 = alpha²/beta² as printed for this family")

# pairing 3: non-diagonal source
for _k in (2, 3):
    _fam, _g = f"sol-xi{_k}", f"thm5.1.3.xi{_k}"
    _case(f"{_g}.i", _fam, SOL_PAIRS[3], HARMONIC, _xi_all_zero, _zero("a", "b", "alpha", "beta"), group=_g)
    _case(f"{_g}.ii", _fam, SOL_PAIRS[3], HARMONIC,
          lambda p, c: c.eq(p["a"], p["b"], p["alpha"] ** 2 * p["mu1"] - p["beta"] ** 2),
          _chain(_zero("a", "b"), _ratio_square("mu1", "beta", "alpha")), group=_g)


def _product_relation(target, other, num, den, extra=None):
    """target = num²*other/den² (or num²/(den²*other) with extra='inverse')."""
    def f(p, rng):
        while True:
            _nonzero(p, rng, den)
            _nonzero(p, rng, num, 0.5, 8.0)
            ratio = p[num] ** 2 / p[den] ** 2
            val = ratio / p[other] if extra == "inverse" else ratio * p[other]
            if val > 1:
                p[target] = val
                return
    return f


# pairing 4: both non-diagonal
_case("thm5.1.4.xi2.i", "sol-xi2", SOL_PAIRS[4], HARMONIC, _xi_all_zero, _zero("a", "b", "alpha", "beta"),
      group="thm5.1.4.xi2")
_case("thm5.1.4.xi2", "sol-xi2", SOL_PAIRS[4], HARMONIC,
      lambda p, c: (c.eq(p["a"], p["b"], p["alpha"] ** 2 * p["mu1"] - p["beta"] ** 2 * p["mu2"])
                    and c.ne(abs(p["alpha"]) + abs(p["beta"]))),
      _chain(_zero("a", "b"), _product_relation("mu2", "mu1", "alpha", "beta")), group="thm5.1.4.xi2")
_case("thm5.1.4.xi3.i", "sol-xi3", SOL_PAIRS[4], HARMONIC, _xi_all_zero, _zero("a", "b", "alpha", "beta"),
      group="thm5.1.4.xi3")
_case("thm5.1.4.xi3", "sol-xi3", SOL_PAIRS[4], HARMONIC,
      lambda p, c: (c.eq(p["a"], p["b"], p["alpha"] ** 2 * p["mu1"] * p["mu2"] - p["beta"] ** 2)
                    and c.ne(abs(p["alpha"]) + abs(p["beta"]))),
      _chain(_zero("a", "b"), _product_relation("mu2", "mu1", "beta", "alpha", "inverse")),
      group="thm5.1.4.xi3")

# sol: biharmonic iff harmonic
for _item, _pair in SOL_PAIRS.items():
    for _k in (1, 2, 3):
        _case(f"thm5.2.{_item}.xi{_k}", f"sol-xi{_k}", _pair, EQUIV, lambda p, c: True,
              special_strata(f"sol-xi{_k}", _pair), generic=False)

# su(2): single factors -------------------------------------------------------

DIAG = ("diag", "diag")
_SU2_AXES = {1: ("mu", "nu"), 2: ("lambda", "nu"), 3: ("lambda", "mu")}


def _tie(name_a, name_b, side) -> Mutator:
    def f(p, rng):
        p[name_a + side] = p[name_b + side]
    return f


def _apart(x, y) -> Mutator:
    def f(p, rng):
        for s in ("1", "2"):
            if abs(p[x + s] - p[y + s]) < 0.05:
                p[x + s] = p[y + s] + 0.5
    return f


def _cos2_half(p, rng):
    p["a"] = _pm(rng) * rng.choice((math.pi / 4, 3 * math.pi / 4))


def _sin2a_zero(p, rng):
    p["a"] = rng.choice((-1, 0, 1, 2)) * math.pi / 2


def _single_factor_cases(alg, prefix, items):
    fam = lambda k: f"{alg}-xi{k}"
    for k, (first, generic_item) in items.items():
        x, y = _SU2_AXES[k]
        if first is not None:
            for j, side in enumerate(("2", "1")):
                _case(f"{prefix}.{first}.{'ab'[j]}", fam(k), DIAG, HARMONIC,
                      lambda p, c, x=x, y=y, s=side: c.eq(p[x + s] - p[y + s]),
                      _tie(x, y, side))
        g = f"{prefix}.{generic_item}"
        _case(f"{g}.h", fam(k), DIAG, HARMONIC, lambda p, c: c.eq(sin(2 * p["a"])), _sin2a_zero,
              setting=_apart(x, y), group=g)
        _case(f"{g}.bnh", fam(k), DIAG, BNH, lambda p, c: c.eq(cos(p["a"]) ** 2 - 0.5), _cos2_half,
              setting=_apart(x, y), group=g + ".bnh")


_single_factor_cases("su2", "prop6.1", {1: (1, 2), 2: (3, 4), 3: (5, 6)})

# su(2): product of three rotations ---------------------------------------

SU2 = ("su2", "su2")


def _stratum(kind: str, side: str) -> Mutator:
    """Metric strata: 'gen' nu<mu<lam, 'nu=mu' nu=mu<lam, 'mu=lam' nu<mu=lam."""
    def f(p, rng):
        lam, mu, nu = (float(p[k + side]) for k in ("lambda", "mu", "nu"))
        nu, mu, lam = sorted((nu, mu, lam))
        mu = max(mu, nu + 0.2)
        lam = max(lam, mu + 0.2)
        if kind == "nu=mu":
            mu = nu
        elif kind == "mu=lam":
            mu = lam
        p["lambda" + side], p["mu" + side], p["nu" + side] = lam, mu, nu
    return f


def _strata(s1, s2) -> Mutator:
    return _chain(_stratum(s1, "1"), _stratum(s2, "2"))


def _angles_to_floats(p, rng):
    for k in ("a", "b", "c"):
        p[k] = float(p[k])


def _b_half_pi(sign):
    def f(p, rng):
        p["b"] = sign * math.pi / 2
        q = rng.choice((-1, 0, 1, 2)) * math.pi / 2
        p["c"] = p["a"] - q if sign > 0 else q - p["a"]
    return f


def _b_zero(p, rng):
    p["b"] = rng.choice((0.0, math.pi))


def _quarter(name):
    def f(p, rng):
        p[name] = rng.choice((-1, 0, 1, 2)) * math.pi / 2
    return f


def _half(name, offset):
    def f(p, rng):
        p[name] = offset + rng.choice((0.0, math.pi))
    return f


_C_I = lambda p, c: c.eq(cos(p["b"]), sin(p["b"]) - 1, sin(2 * (p["a"] - p["c"])))
_C_II = lambda p, c: c.eq(cos(p["b"]), sin(p["b"]) + 1, sin(2 * (p["a"] + p["c"])))
_K_I, _K_II = _b_half_pi(1), _b_half_pi(-1)


def _v_branch(p, rng):
    b, c = p["b"], p["c"]
    r = sqrt(sin(c) ** 2 + sin(b) ** 2 * cos(c) ** 2)
    k = rng.choice((0, 1))
    p["a"] = math.atan2((-1) ** (k + 1) * sin(b) * cos(c) / r, (-1) ** k * sin(c) / r)


def _v_cond(p, c):
    b, cc, a = p["b"], p["c"], p["a"]
    r = sqrt(sin(cc) ** 2 + sin(b) ** 2 * cos(cc) ** 2)
    if r == 0:
        return False
    return any(c.eq(cos(a) - (-1) ** k * sin(cc) / r, sin(a) - (-1) ** (k + 1) * sin(b) * cos(cc) / r)
               for k in (0, 1))


_THM61 = {
    1: (("gen", "gen"), {
        "i": (_C_I, _K_I), "ii": (_C_II, _K_II),
        "iii": (lambda p, c: c.eq(sin(p["b"]), sin(2 * p["c"]), sin(2 * p["a"])),
                _chain(_b_zero, _quarter("a"), _quarter("c")))}),
    2: (("gen", "nu=mu"), {
        "i": (_C_I, _K_I), "ii": (_C_II, _K_II),
        "iii": (lambda p, c: c.eq(sin(p["b"]), sin(p["a"])), _chain(_b_zero, _half("a", 0.0))),
        "iv": (lambda p, c: c.eq(sin(p["b"]), sin(2 * p["c"]), cos(p["a"])),
               _chain(_b_zero, _half("a", math.pi / 2), _quarter("c")))}),
    3: (("mu=lam", "gen"), {
        "i": (_C_I, _K_I), "ii": (_C_II, _K_II),
        "iii": (lambda p, c: c.eq(sin(p["b"]), sin(p["a"]), sin(2 * p["c"])),
                _chain(_b_zero, _half("a", 0.0), _quarter("c"))),
        "iv": (lambda p, c: c.eq(sin(p["b"]), cos(p["a"]), sin(2 * p["c"])),
               _chain(_b_zero, _half("a", math.pi / 2), _quarter("c")))}),
    4: (("gen", "mu=lam"), {
        "i": (lambda p, c: c.eq(cos(p["b"])), _half("b", math.pi / 2)),
        "ii": (lambda p, c: c.eq(sin(p["b"]), sin(2 * p["c"])), _chain(_b_zero, _quarter("c")))}),
    5: (("nu=mu", "gen"), {
        "i": (lambda p, c: c.eq(cos(p["b"])), _half("b", math.pi / 2)),
        "ii": (lambda p, c: c.eq(sin(p["b"]), sin(2 * p["a"])), _chain(_b_zero, _quarter("a")))}),
    6: (("nu=mu", "nu=mu"), {
        "i": (lambda p, c: c.eq(cos(p["b"])), _half("b", math.pi / 2)),
        "ii": (lambda p, c: c.eq(cos(p["a"])), _half("a", math.pi / 2)),
        "iii": (lambda p, c: c.eq(sin(p["b"]), sin(p["a"])), _chain(_b_zero, _half("a", 0.0)))}),
    7: (("nu=mu", "mu=lam"), {
        "i": (lambda p, c: c.eq(sin(2 * p["b"])), _quarter("b"))}),
    8: (("mu=lam", "mu=lam"), {
        "i": (lambda p, c: c.eq(cos(p["b"]) * cos(p["c"])),
              lambda p, rng: _half(rng.choice("bc"), math.pi / 2)(p, rng)),
        "ii": (lambda p, c: c.eq(sin(p["b"]), sin(p["c"])), _chain(_b_zero, _half("c", 0.0)))}),
    9: (("mu=lam", "nu=mu"), {
        "i": (_C_I, _K_I), "ii": (_C_II, _K_II),
        "iii": (lambda p, c: c.eq(cos(p["c"]), sin(2 * p["a"])),
                _chain(_half("c", math.pi / 2), _quarter("a"))),
        "iv": (lambda p, c: c.eq(sin(p["b"]), sin(p["c"])), _chain(_b_zero, _half("c", 0.0))),
        "v": (_v_cond, _v_branch)}),
}

for _item, ((_s1, _s2), _branches) in _THM61.items():
    _g = f"thm6.1.{_item}"
    _note = "hypothesis printed twice; the single printed ordering is used" if _item == 1 else ""
    for _b, (_cond, _cons) in _branches.items():
        _case(f"{_g}.{_b}", "su2-xi3xi2xi1", SU2, HARMONIC, _cond, _chain(_angles_to_floats, _cons),
              setting=_strata(_s1, _s2), group=_g, note=_note)

_FOURTH_ROOT_HALF = 0.5 ** 0.25


def _example(p, rng):
    t = math.acos(_FOURTH_ROOT_HALF)
    p["a"], p["b"] = _pm(rng) * t, _pm(rng) * t


_case("ex6", "su2-xi3xi2xi1", SU2, BNH,
      lambda p, c: c.eq(cos(p["a"]) - _FOURTH_ROOT_HALF, cos(p["b"]) - _FOURTH_ROOT_HALF),
      _example, setting=_strata("nu=mu", "nu=mu"), generic=False)


def _round(side):
    def f(p, rng):
        p["mu" + side] = p["nu" + side] = p["lambda" + side]
    return f


_case("prop.bi.1", "su2-xi3xi2xi1", SU2, HARMONIC, lambda p, c: True, _round("1"), generic=False)
_case("prop.bi.2", "su2-xi3xi2xi1", SU2, HARMONIC, lambda p, c: True, _round("2"), generic=False)

# sl(2,R) -------------------------------------------------------------------

SL2 = ("sl2", "sl2")
for _k in (1, 2):
    _case(f"prop7.1.{_k}", f"sl2-xi{_k}", DIAG, HARMONIC, lambda p, c: c.eq(p["a"]), _set(a=0.0),
          group=f"prop7.1.{_k}")
    _case(f"prop7.1.{_k}.bi", f"sl2-xi{_k}", DIAG, EQUIV, lambda p, c: True,
          lambda p, rng: _set(a=0.0)(p, rng) if rng.random() < 0.3 else None, generic=False)
for _j, _side in enumerate(("2", "1")):
    _case(f"prop7.1.3.{'ab'[_j]}", "sl2-xi3", DIAG, HARMONIC,
          lambda p, c, s=_side: c.eq(p["lambda" + s] - p["mu" + s]), _tie("lambda", "mu", _side))
_case("prop7.1.4.h", "sl2-xi3", DIAG, HARMONIC, lambda p, c: c.eq(sin(2 * p["a"])), _sin2a_zero,
      setting=_apart("lambda", "mu"), group="prop7.1.4")
_case("prop7.1.4.bnh", "sl2-xi3", DIAG, BNH, lambda p, c: c.eq(cos(p["a"]) ** 2 - 0.5), _cos2_half,
      setting=_apart("lambda", "mu"), group="prop7.1.4.bnh")

_BC0 = _set(b=0.0, c=0.0)
_case("thm7.1.i", "sl2-xi3xi2xi1", SL2, HARMONIC,
      lambda p, c: c.eq(p["b"], p["c"], sin(2 * p["a"])), _chain(_BC0, _sin2a_zero), group="thm7.1")
_case("thm7.1.ii", "sl2-xi3xi2xi1", SL2, HARMONIC,
      lambda p, c: c.eq(p["b"], p["c"], p["lambda2"] - p["mu2"]), _chain(_BC0, _tie("lambda", "mu", "2")),
      group="thm7.1")
_case("thm7.1.iii", "sl2-xi3xi2xi1", SL2, HARMONIC,
      lambda p, c: c.eq(p["b"], p["c"], p["lambda1"] - p["mu1"]), _chain(_BC0, _tie("lambda", "mu", "1")),
      group="thm7.1")


GROUPS = {
    "nil": ("thm3.",),
    "e02": ("thm4.",),
    "sol": ("thm5.",),
    "su2": ("prop6.", "thm6.", "ex6", "prop.bi"),
    "sl2": ("prop7.", "thm7."),
}


def theorem_catalog() -> List[TheoremCase]:
    return list(CATALOG)


def case(id: str) -> TheoremCase:
    for c in CATALOG:
        if c.id == id:
            return c
    raise KeyError(id)


def cases_in_group(group: str) -> List[TheoremCase]:
    prefixes = GROUPS[group]
    return [c for c in CATALOG if c.id.startswith(prefixes)]


def _siblings(c: TheoremCase) -> List[TheoremCase]:
    if not c.group:
        return [c]
    return [d for d in CATALOG if d.group == c.group and d.expect == "holds"]


# ---------------------------------------------------------------- sweeps

def condition_sample(c: TheoremCase, rng: random.Random) -> Params:
    for _ in range(MAX_TRIES):
        p = base_sample(c, rng)
        if c.construct is not None:
            c.construct(p, rng)
        fam = family(c.family)
        if fam.check is not None and fam.check(p):
            continue
        ctx = Ctx(0 if _exact(p) else CONDITION_TOL)
        if c.condition(p, ctx):
            return p
    raise SamplingInfeasible(f"{c.id}: could not construct a point satisfying the branch")


def verify_case(c: TheoremCase, n: int = 500, seed: int = 0, tol: float = DEFAULT_TOL) -> SweepResult:
    """Soundness on ``n`` constructed points, completeness on ``n`` generic ones."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(f"{seed}:{c.id}")
    res = SweepResult(c.id, c.expected, c.expect, 0, 0, note=c.note)
    for _ in range(n):
        p = condition_sample(c, rng)
        r = analyze(problem_of(c, p), tol)
        res.n_condition_samples += 1
        if not verdict_holds(c.expected, r):
            res.failures.append(_record(p, r))
    if c.generic and c.expected != EQUIV and c.expect == "holds":
        near = Ctx(MARGIN, relax=True)
        siblings = _siblings(c)
        while res.n_generic_samples < n:
            p = base_sample(c, rng)
            if any(s.condition(p, near) for s in siblings):
                res.n_discarded += 1
                if res.n_discarded > 50 * n:
                    break
                continue
            r = analyze(problem_of(c, p), tol)
            res.n_generic_samples += 1
            if verdict_holds(c.expected, r):
                res.failures.append(_record(p, r))
    res.failures.sort(key=lambda f: f[0])
    return res


_EQUIV_SETTINGS = {
    "nil": [("nil-generic", NIL)],
    "sol": [(f"sol-xi{k}", pair) for pair in SOL_PAIRS.values() for k in (1, 2, 3)],
}


EQUIVALENCE_ALGEBRAS = tuple(_EQUIV_SETTINGS)


def verify_equivalence(algebra: str, n: int = 2000, seed: int = 0, tol: float = DEFAULT_TOL) -> SweepResult:
    """harmonic <=> biharmonic on ``n`` problems spread over the algebra's families and pairings."""
    if algebra not in _EQUIV_SETTINGS:
        raise ValueError(f"no equivalence sweep for {algebra!r}")
    rng = random.Random(f"{seed}:equivalence:{algebra}")
    settings = _EQUIV_SETTINGS[algebra]
    res = SweepResult(f"equivalence.{algebra}", EQUIV, "holds", 0, 0)
    for i in range(n):
        fam, metrics = settings[i % len(settings)]
        c = TheoremCase("tmp", fam, metrics, EQUIV, lambda p, ctx: True, special_strata(fam, metrics))
        p = condition_sample(c, rng)
        r = analyze(problem_of(c, p), tol)
        res.n_condition_samples += 1
        if r.harmonic != r.biharmonic:
            res.failures.append(_record(p, r))
    res.failures.sort(key=lambda f: f[0])
    return res


def run(cases: Sequence[TheoremCase], n: int = 500, seed: int = 0, tol: float = DEFAULT_TOL) -> List[SweepResult]:
    return [verify_case(c, n, seed, tol) for c in cases]


# ---------------------------------------------------------------- unstructured problems

def random_gram(rng: random.Random, exact: bool = False):
    """``A A^T + I/4`` with entries of ``A`` in [-2, 2]: positive definite, generally not diagonal."""
    one = la.Q(1) if exact else 1.0
    a = [[random_value(rng, -2, 2, exact, 16) for _ in la.RANGE] for _ in la.RANGE]
    return tuple(tuple(sum((a[i][k] * a[j][k] for k in la.RANGE), one * 0) + (one / 4 if i == j else 0)
                       for j in la.RANGE) for i in la.RANGE)


def random_problem(algebra: str, rng: random.Random, exact: bool = False):
    """A problem on ``algebra`` with a random family member and random metrics.

    Half the draws use the named metric families, half arbitrary positive
    definite Gram matrices.  Transcendental families force the float path.
    """
    fams = [f for f in FAMILIES.values() if f.algebra == algebra]
    fam = fams[rng.randrange(len(fams))]
    exact = exact and not fam.transcendental
    p = sample_params(fam, rng, exact)
    if fam.algebra == "sl2":
        p.update({k: rng.uniform(-2.0, 2.0) for k in ("b", "c") if k in p})
        if fam.name != "sl2-xi3":
            p["a"] = rng.uniform(-2.0, 2.0)
    h = instantiate(fam, p, validate_result=False)
    if rng.random() < 0.5:
        mf = rng.choice(_METRIC_CHOICES[algebra])
        q = {}
        q.update(sample_metric_params(mf[0], rng, exact, "1"))
        q.update(sample_metric_params(mf[1], rng, exact, "2"))
        g1, g2 = metric_from(mf[0], q, "1"), metric_from(mf[1], q, "2")
    else:
        g1, g2 = random_gram(rng, exact), random_gram(rng, exact)
    return make_problem(algebra, g1, g2, h, path="exact" if exact else "float")


_METRIC_CHOICES = {
    "nil": [NIL],
    "e02": [E02],
    "sol": list(SOL_PAIRS.values()),
    "su2": [("su2", "su2"), ("diag", "diag")],
    "sl2": [("sl2", "sl2"), ("diag", "diag")],
}
