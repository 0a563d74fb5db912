"""Command-line entry point: analyze, verify, search, report.

Exit codes: 0 pass, 1 verification failures, 2 usage or input error.
Machine output is JSON, written to ``--out`` (stdout by default); the
human-readable summary goes to stdout when ``--out`` names a file and to
stderr otherwise, so stdout stays parseable.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from . import classification as cls
from . import closed_forms as cf
from . import linalg3 as la
from .errors import InvalidInput, LieHarmError
from .homomorphism import Homomorphism, instantiate
from .metric_space import Metric, metric_family
from .search import SearchSpec, minimize, scan_biharmonic_not_harmonic
from .tension import analyze, make_problem

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str] = None
    out: Optional[str] = None
    tol: float = 1e-9
    seed: int = 0
    n: int = 500
    path: str = "auto"
    group: Optional[str] = None
    cases: tuple = ()

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidInput("--tol must be positive")
        if self.n < 1:
            raise InvalidInput("--n must be at least 1")


# ---------------------------------------------------------------- JSON input

def _number(x):
    """JSON numbers; strings such as "1/2" are read as exact rationals."""
    if isinstance(x, bool):
        raise InvalidInput(f"expected a number, got {x!r}")
    if isinstance(x, int):
        return la.Q(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return la.Q(Fraction(x).numerator, Fraction(x).denominator)
        except ValueError:
            raise InvalidInput(f"not a number: {x!r}") from None
    raise InvalidInput(f"expected a number, got {x!r}")


def _matrix(v, what):
    if not isinstance(v, list) or len(v) != 9:
        raise InvalidInput(f"{what} must be a row-major array of 9 numbers")
    vals = [_number(x) for x in v]
    return tuple(tuple(vals[3 * i:3 * i + 3]) for i in la.RANGE)


def _params(d, what):
    if not isinstance(d.get("params", {}), dict):
        raise InvalidInput(f"{what}.params must be an object")
    return {k: _number(v) for k, v in d.get("params", {}).items()}


def parse_metric(v, what="metric"):
    if isinstance(v, dict):
        if "family" not in v:
            raise InvalidInput(f"{what} needs a family")
        return metric_family(v["family"], _params(v, what))
    return Metric(_matrix(v, what))


def parse_xi(v, algebra):
    if isinstance(v, dict):
        if "family" not in v:
            raise InvalidInput("xi needs a family")
        h = instantiate(v["family"], _params(v, "xi"), validate_result=False)
        if h.src.id != algebra:
            raise InvalidInput(f"family {v['family']} lives on {h.src.id}, not {algebra}")
        return h.m
    return _matrix(v, "xi")


def parse_problem(d, path="auto"):
    if not isinstance(d, dict):
        raise InvalidInput("problem must be a JSON object")
    try:
        alg = d["algebra"]
        m1, m2 = parse_metric(d["metric1"], "metric1"), parse_metric(d["metric2"], "metric2")
        xi = parse_xi(d["xi"], alg)
    except KeyError as e:
        raise InvalidInput(f"missing field {e}") from None
    return make_problem(alg, m1, m2, xi, path=path)


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InvalidInput(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path}: invalid JSON ({e})") from None


# ---------------------------------------------------------------- output

def _emit(cfg: RunConfig, payload, summary: Sequence[str]):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if cfg.out:
        try:
            with open(cfg.out, "w") as fh:
                fh.write(text + "\n")
        except OSError as e:
            raise InvalidInput(f"cannot write {cfg.out}: {e.strerror}") from None
        table = sys.stdout
    else:
        print(text)
        table = sys.stderr
    for line in summary:
        print(line, file=table)


def _sweep_lines(results) -> List[str]:
    lines = [f"{'case':32s} {'expect':8s} {'cond':>5s} {'gen':>5s} {'fail':>5s}  status"]
    for r in results:
        lines.append(f"{r.case_id:32s} {r.expect:8s} {r.n_condition_samples:5d} {r.n_generic_samples:5d} "
                     f"{len(r.failures):5d}  {'ok' if r.passed else 'FAIL'}")
    bad = sum(not r.passed for r in results)
    lines.append(f"{len(results) - bad}/{len(results)} passed")
    return lines


# ---------------------------------------------------------------- commands

def cmd_analyze(cfg: RunConfig) -> int:
    if not cfg.input:
        raise InvalidInput("analyze needs an input file")
    d = _load(cfg.input)
    problems = d if isinstance(d, list) else [d]
    reports = [analyze(parse_problem(x, cfg.path), cfg.tol) for x in problems]
    out = [r.to_json() for r in reports]
    lines = [f"problem {i}: harmonic={r.harmonic} biharmonic={r.biharmonic} ({r.arithmetic_path})"
             for i, r in enumerate(reports)]
    _emit(cfg, out if isinstance(d, list) else out[0], lines)
    return EXIT_OK


def _selected_cases(cfg: RunConfig):
    if cfg.cases:
        ids = {c.id for c in cls.theorem_catalog()}
        unknown = [c for c in cfg.cases if c not in ids]
        if unknown:
            raise InvalidInput(f"unknown case id(s): {', '.join(unknown)}")
        return [cls.case(c) for c in cfg.cases]
    if cfg.group:
        if cfg.group not in cls.GROUPS:
            raise InvalidInput(f"unknown group {cfg.group!r}; choose from {', '.join(cls.GROUPS)}")
        return cls.cases_in_group(cfg.group)
    return cls.theorem_catalog()


def _equivalence_algebras(cfg: RunConfig):
    if cfg.cases:
        return []
    algs = [cfg.group] if cfg.group else list(cls.GROUPS)
    return [a for a in algs if a in cls.EQUIVALENCE_ALGEBRAS]


def run_verify(cfg: RunConfig):
    results = cls.run(_selected_cases(cfg), cfg.n, cfg.seed, cfg.tol)
    results += [cls.verify_equivalence(a, cfg.n, cfg.seed, cfg.tol) for a in _equivalence_algebras(cfg)]
    return results


def cmd_verify(cfg: RunConfig) -> int:
    results = run_verify(cfg)
    _emit(cfg, [r.to_json() for r in results], _sweep_lines(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_search(cfg: RunConfig) -> int:
    if not cfg.input:
        raise InvalidInput("search needs an input file")
    d = _load(cfg.input)
    if not isinstance(d, dict):
        raise InvalidInput("search spec must be a JSON object")
    spec = SearchSpec.from_json(d)
    mode = d.get("mode", "minimize")
    if mode == "minimize":
        results = [minimize(spec, cfg.seed)]
    elif mode == "scan":
        results = scan_biharmonic_not_harmonic(spec, int(d.get("n", cfg.n)), cfg.seed)
    else:
        raise InvalidInput(f"unknown search mode {mode!r}")
    lines = [f"{mode}: {len(results)} result(s)"]
    lines += [f"  value={r.value:.3e} converged={r.converged} " +
              " ".join(f"{k}={r.params[k]:.10g}" for k in spec.free_names) for r in results]
    _emit(cfg, {"mode": mode, "results": [r.to_json() for r in results]}, lines)
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    """Closed-form audit plus every sweep, in one document."""
    audits = [cf.audit(f, n=cfg.n, seed=cfg.seed) for f in cf.CLOSED_FORMS]
    sweeps = run_verify(cfg)
    ok = all(a.passed for a in audits) and all(r.passed for r in sweeps)
    payload = {"closed_forms": [a.to_json() for a in audits],
               "sweeps": [r.to_json() for r in sweeps],
               "passed": ok}
    lines = [f"{'closed form':40s} {'n':>5s} {'fail':>5s}  status"]
    lines += [f"{a.id:40s} {a.n:5d} {a.failures:5d}  {'ok' if a.passed else 'FAIL'}" for a in audits]
    lines += _sweep_lines(sweeps)
    _emit(cfg, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"analyze": cmd_analyze, "verify": cmd_verify, "search": cmd_search, "report": cmd_report}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="zero-test tolerance (float path)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n", type=int, default=500, help="samples per case")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    arith = common.add_mutually_exclusive_group()
    arith.add_argument("--exact", dest="path", action="store_const", const="exact")
    arith.add_argument("--float", dest="path", action="store_const", const="float")
    common.set_defaults(path="auto")

    ap = argparse.ArgumentParser(prog="liebiharm", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="tension report for a problem file")
    a.add_argument("input")
    v = sub.add_parser("verify", parents=[common], help="run classification sweeps")
    v.add_argument("--group", help="algebra: " + ", ".join(cls.GROUPS))
    v.add_argument("--case", dest="cases", action="append", default=[], help="case id (repeatable)")
    s = sub.add_parser("search", parents=[common], help="simplex search from a spec file")
    s.add_argument("input")
    r = sub.add_parser("report", parents=[common], help="closed-form audit and all sweeps")
    r.add_argument("--group")
    r.set_defaults(cases=[])
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = RunConfig(command=ns.command, input=getattr(ns, "input", None), out=ns.out, tol=ns.tol,
                        seed=ns.seed, n=ns.n, path=ns.path, group=getattr(ns, "group", None),
                        cases=tuple(getattr(ns, "cases", ())))
        return COMMANDS[cfg.command](cfg)
    except LieHarmError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
