"""Command-line interface.

Every invocation prints one JSON report on stdout, errors included.
Exit codes: 0 success / all checks pass, 1 verification failure,
2 input error, 3 parameter error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional, Sequence

from . import __version__
from .acceptance import (
    DEFAULT_TOLERANCES,
    THRESHOLDS,
    criterion_11,
    resolve_tolerances,
    run_criteria,
    sensitivity_sweep,
)
from .chain import (
    RuleSpec,
    bayes_residual,
    chain_residual,
    chain_sweep,
    mutual_information,
    n_chain_residual,
    pseudo_add_residual,
    sequential_conditionals,
    write_jsonl,
)
from .conditional import conditional
from .darotzy import DarotzyParams, transform
from .errors import InvalidParameters, QEntropyError
from .families import EntropySpec, entropy
from .io import file_digest, load_table, load_vector
from .landsberg import SamplerConfig, classify
from .prob import escort_discrepancy, escort_joint_composed, escort_joint_direct, marginal

SCHEMA_VERSION = 1
SEED_ENV = "QENTROPY_SEED"
DEFAULT_TOL = 1e-9

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PARAM = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameters(f"{SEED_ENV}={raw!r} is not an integer") from None


def _family_args(p: argparse.ArgumentParser, flag: str = "--family", gamma: bool = True) -> None:
    p.add_argument(flag, dest="family", required=True, help="entropy family (shannon, renyi, tsallis, landsberg, bc, sm, fd, ja)")
    p.add_argument("--q", type=float, help="deformation parameter q")
    p.add_argument("--r", type=float, help="second deformation r (fd, sm)")
    if gamma:
        p.add_argument("--gamma", type=float, help="Behara-Chawla gamma")


def _spec(args, gamma: bool = True) -> EntropySpec:
    return EntropySpec(args.family, q=args.q, r=args.r, gamma=getattr(args, "gamma", None) if gamma else None)


def _tol_arg(p, default=DEFAULT_TOL):
    p.add_argument("--tol", type=float, default=default, help=f"residual tolerance (default {default:g})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qentropy", description="Generalized entropies, chain rules and their verification.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", help="entropy of a distribution")
    _family_args(p)
    p.add_argument("--dist", required=True)

    p = sub.add_parser("conditional", help="conditional entropy of a 2-D joint")
    _family_args(p)
    p.add_argument("--joint", required=True)
    p.add_argument("--given", choices=("x", "y"), default="y")

    p = sub.add_parser("chain-check", help="residual of the additive or q-extensive chain rule")
    _family_args(p)
    p.add_argument("--rule", choices=("additive", "q-extensive"), required=True)
    p.add_argument("--rule-q", type=float, help="q of the q-extensive rule (default: the family's own)")
    p.add_argument("--joint", required=True)
    p.add_argument("--given", choices=("x", "y"), default="x")
    p.add_argument("--records", help="append a JSON-lines residual record to this file")
    _tol_arg(p)

    p = sub.add_parser("pseudo-add-check", help="residual of an additivity rule on independent inputs")
    _family_args(p)
    p.add_argument("--rule", choices=("additive", "tsallis", "landsberg", "delta"), required=True)
    p.add_argument("--rule-q", type=float, help="q of the tsallis/landsberg rule (default: the family's own)")
    p.add_argument("--delta", type=float, help="delta of the delta-additivity rule")
    p.add_argument("--px", required=True)
    p.add_argument("--py", required=True)
    _tol_arg(p)

    p = sub.add_parser("nchain-check", help="residual of the n-partite chain rule on an N-D joint")
    _family_args(p)
    p.add_argument("--rule-q", type=float, help="q of the chain rule (default: the family's own)")
    p.add_argument("--joint", required=True)
    _tol_arg(p)

    p = sub.add_parser("escort-discrepancy", help="distance between direct and composed escort joints")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--joint", required=True)

    p = sub.add_parser("darotzy-transform", help="push a chain-rule solution through Darotzy's mapping")
    p.add_argument("--base", dest="family", required=True)
    p.add_argument("--q", type=float, help="base family q")
    p.add_argument("--r", type=float, help="base family r")
    p.add_argument("--gamma", type=float, required=True, help="Darotzy gamma (= 1 - q of the result)")
    p.add_argument("--lambda", dest="lam", type=float, help="Darotzy lambda (default: gamma)")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--joint", required=True)
    _tol_arg(p)

    p = sub.add_parser("classify", help="Landsberg S/H/C classification by sampling")
    _family_args(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--correlated", action="store_true", help="probe superadditivity on arbitrary joints")
    _tol_arg(p)

    p = sub.add_parser("verify-all", help="run the acceptance suite")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help=f"override a tolerance; names: {', '.join(DEFAULT_TOLERANCES)}")
    p.add_argument("--no-sensitivity", action="store_true", help="skip the 1e-15 sensitivity sweep")
    p.add_argument("--records", help="write chain-rule residual records (JSON lines) here")
    return parser


def _input(path: str) -> dict:
    return {"path": path, "sha256": file_digest(path)}


def _verdict(residual: float, tol: float) -> tuple[int, dict]:
    ok = abs(residual) <= tol
    return (EXIT_OK if ok else EXIT_FAIL), {"residual": residual, "abs_residual": abs(residual), "passed": ok}


def _cmd_entropy(args, report):
    spec = _spec(args)
    p = load_vector(args.dist)
    report["inputs"]["dist"] = _input(args.dist)
    report["results"] = {"spec": spec.to_dict(), "value": entropy(spec, p), "n": len(p)}
    return EXIT_OK


def _cmd_conditional(args, report):
    spec = _spec(args)
    j = load_table(args.joint)
    report["inputs"]["joint"] = _input(args.joint)
    other = "y" if args.given == "x" else "x"
    report["results"] = {
        "spec": spec.to_dict(),
        "quantity": f"H({other.upper()}|{args.given.upper()})",
        "value": conditional(spec, j, args.given),
        "non_axiomatic": spec.family == "ja",
    }
    return EXIT_OK


def _cmd_chain(args, report):
    spec = _spec(args)
    j = load_table(args.joint)
    if j.ndim != 2:
        raise InvalidParameters("chain-check needs a 2-D joint; use nchain-check for more variables")
    report["inputs"]["joint"] = _input(args.joint)
    if args.rule == "additive":
        rule = RuleSpec("additive_chain")
    else:
        rule = RuleSpec("q_extensive_chain", q=spec.chain_q if args.rule_q is None else args.rule_q)
    res = chain_residual(spec, j, rule, args.given)
    code, verdict = _verdict(res, args.tol)
    report["tolerances"] = {"residual": args.tol}
    report["results"] = {"spec": spec.to_dict(), "rule": rule.to_dict(), "given": args.given, **verdict}
    if spec.family == "ja":
        report["results"]["non_axiomatic"] = True
    if args.records:
        with open(args.records, "a") as fh:
            write_jsonl(chain_sweep(spec, [j], rule, args.given), fh)
    return code


_ADD_RULES = {"additive": "additive", "tsallis": "tsallis_add", "landsberg": "landsberg_add", "delta": "delta_add"}


def _cmd_pseudo_add(args, report):
    spec = _spec(args)
    px, py = load_vector(args.px), load_vector(args.py)
    report["inputs"]["px"] = _input(args.px)
    report["inputs"]["py"] = _input(args.py)
    kind = _ADD_RULES[args.rule]
    q = None
    if kind in ("tsallis_add", "landsberg_add"):
        q = spec.chain_q if args.rule_q is None else args.rule_q
    rule = RuleSpec(kind, q=q, delta=args.delta)
    code, verdict = _verdict(pseudo_add_residual(spec, px, py, rule), args.tol)
    report["tolerances"] = {"residual": args.tol}
    report["results"] = {"spec": spec.to_dict(), "rule": rule.to_dict(), **verdict}
    return code


def _cmd_nchain(args, report):
    spec = _spec(args)
    j = load_table(args.joint)
    report["inputs"]["joint"] = _input(args.joint)
    q = spec.chain_q if args.rule_q is None else args.rule_q
    code, verdict = _verdict(n_chain_residual(spec, j, q), args.tol)
    report["tolerances"] = {"residual": args.tol}
    report["results"] = {
        "spec": spec.to_dict(),
        "q": q,
        "n": j.ndim,
        "conditionals": sequential_conditionals(spec, j),
        "joint_entropy": entropy(spec, j),
        **verdict,
    }
    return code


def _cmd_escort(args, report):
    j = load_table(args.joint)
    report["inputs"]["joint"] = _input(args.joint)
    report["results"] = {
        "q": args.q,
        "discrepancy": escort_discrepancy(j, args.q),
        "direct": escort_joint_direct(j, args.q).tolist(),
        "composed": escort_joint_composed(j, args.q).tolist(),
    }
    return EXIT_OK


def _cmd_darotzy(args, report):
    base = EntropySpec(args.family, q=args.q, r=args.r)
    params = DarotzyParams(lam=args.gamma if args.lam is None else args.lam, gamma=args.gamma, a=args.a)
    t = transform(base, params)
    j = load_table(args.joint)
    report["inputs"]["joint"] = _input(args.joint)
    base_rule = RuleSpec("additive_chain") if base.chain_q == 1.0 else RuleSpec("q_extensive_chain", q=base.chain_q)
    rule = RuleSpec("additive_chain") if params.gamma == 0 else RuleSpec("q_extensive_chain", q=t.q)
    code, verdict = _verdict(chain_residual(t, j, rule), args.tol)
    report["tolerances"] = {"residual": args.tol}
    report["results"] = {
        "base": base.to_dict(),
        "darotzy": params.to_dict(),
        "q": t.q,
        "H_X": t.entropy(marginal(j, "x")),
        "H_Y": t.entropy(marginal(j, "y")),
        "H_XY": t.entropy(j),
        "H_Y_given_X": t.conditional(j, "x"),
        "base_chain_residual": chain_residual(base, j, base_rule),
        "rule": rule.to_dict(),
        **verdict,
    }
    return code


def _cmd_classify(args, report):
    spec = _spec(args)
    seed = _default_seed() if args.seed is None else args.seed
    if args.trials < 0:
        raise InvalidParameters("--trials must be >= 0")
    cfg = SamplerConfig(trials=args.trials, seed=seed, max_dim=args.max_dim, correlated=args.correlated, tol=args.tol)
    v = classify(spec, cfg)
    report["seed"] = seed
    report["tolerances"] = {"violation": args.tol}
    report["results"] = v.to_dict()
    return EXIT_FAIL if v.impossible_class else EXIT_OK


def _parse_tol_overrides(items) -> dict:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise InvalidParameters(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise InvalidParameters(f"--tol {name}: {value!r} is not a number") from None
    try:
        resolve_tolerances(out)
    except KeyError as exc:
        raise InvalidParameters(str(exc.args[0])) from None
    return out


def _cmd_verify_all(args, report):
    seed = _default_seed() if args.seed is None else args.seed
    overrides = _parse_tol_overrides(args.tol)
    tol = resolve_tolerances(overrides)
    results = run_criteria(seed, overrides)
    for r in results:
        print(r.line(), file=sys.stderr)
    records = [r.to_dict() for r in results]
    if not args.no_sensitivity:
        c11 = criterion_11(results, sensitivity_sweep(seed, overrides))
        print(c11.line(), file=sys.stderr)
        records.append(c11.to_dict())
        results = results + [c11]
    if args.records:
        _write_records(args.records, seed)
    report["seed"] = seed
    report["tolerances"] = tol
    report["thresholds"] = dict(THRESHOLDS)
    report["results"] = {"criteria": records, "passed": [r.cid for r in results if r.passed],
                         "failed": [r.cid for r in results if not r.passed]}
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _write_records(path, seed):
    import numpy as np

    from .acceptance import _joints, q_extensive_specs

    joints = _joints(np.random.default_rng([seed, 7919]), 100)
    with open(path, "w") as fh:
        write_jsonl(chain_sweep(EntropySpec("shannon"), joints, RuleSpec("additive_chain")), fh)
        for s in q_extensive_specs():
            write_jsonl(chain_sweep(s, joints, RuleSpec("q_extensive_chain", q=s.chain_q)), fh)


COMMANDS = {
    "entropy": _cmd_entropy,
    "conditional": _cmd_conditional,
    "chain-check": _cmd_chain,
    "pseudo-add-check": _cmd_pseudo_add,
    "nchain-check": _cmd_nchain,
    "escort-discrepancy": _cmd_escort,
    "darotzy-transform": _cmd_darotzy,
    "classify": _cmd_classify,
    "verify-all": _cmd_verify_all,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    start = time.perf_counter()
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": argv,
        "inputs": {},
        "tolerances": {},
        "seed": None,
        "results": None,
    }
    try:
        args = build_parser().parse_args(argv)
        code = COMMANDS[args.command](args, report)
        report["status"] = "ok" if code == EXIT_OK else "fail"
    except UsageError as exc:
        code = EXIT_INPUT
        report["status"] = "error"
        report["error"] = {"type": "UsageError", "message": str(exc)}
    except QEntropyError as exc:
        code = exc.exit_code
        report["status"] = "error"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    report["exit_code"] = code
    report["wall_time_s"] = round(time.perf_counter() - start, 6)
    out.write(json.dumps(_clean(report), indent=2, sort_keys=True, allow_nan=False) + "\n")
    return code


def _clean(o):
    # strict JSON: numpy scalars unwrapped, non-finite floats become strings
    import math

    import numpy as np

    if isinstance(o, dict):
        return {str(k): _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    if isinstance(o, np.ndarray):
        return _clean(o.tolist())
    if isinstance(o, np.generic):
        o = o.item()
    if isinstance(o, float) and not math.isfinite(o):
        return repr(o)
    return o


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
