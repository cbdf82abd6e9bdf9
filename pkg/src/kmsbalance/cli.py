"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 when one fails (the report
is still written), 2 on input or configuration errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import balance, io, qubit
from .duality import dual_generator, verify_dual_relation
from .exceptions import KmsBalanceError
from .gksl import evolve
from .linalg import resolve_tol
from .invariant import find_invariant_state, verify_invariance
from .special import normalize, require_special

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
CHECKS = ("kms", "sqdb", "sqdb-theta")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _float_list(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override eq_tol")
    common.add_argument("--out", type=Path, default=None, help="write the JSON report here")

    parser = _Parser(prog="kmsbalance", description="Detailed balance checks for GKSL generators.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_problem(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("problem", type=Path, help="JSON problem file")
        return p

    p = with_problem("normalize", "bring a generator to special form")
    p.add_argument("--write-problem", type=Path, default=None, help="write the normalized problem file")
    with_problem("invariant-state", "find a faithful invariant state")
    p = with_problem("dualize", "KMS-dual generator")
    p.add_argument("--write-problem", type=Path, default=None, help="write the dual as a problem file")

    p = sub.add_parser("check", parents=[common], help="structural balance checks")
    p.add_argument("condition", choices=CHECKS + ("all",))
    p.add_argument("problem", type=Path)
    p.add_argument("--strict", action="store_true", help="fail on non-special input instead of normalizing")

    p = with_problem("oracle", "semigroup-level trace identity defect")
    p.add_argument("--condition", choices=("kms", "sqdb-theta"), required=True)
    p.add_argument("--t", type=_float_list, default=balance.DEFAULT_T_GRID, help="comma-separated times")

    p = with_problem("evolve", "apply the Heisenberg semigroup to a matrix")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", type=Path, required=True, help="JSON matrix file")

    p = sub.add_parser("qubit", parents=[common], help="standard-form qubit generator")
    p.add_argument("--case", choices=tuple(qubit.CASES), required=True)
    p.add_argument("--params", type=Path, required=True, help="JSON parameter file")
    p.add_argument("--write-problem", type=Path, default=None)

    p = sub.add_parser("qubit-qdb", parents=[common], help="qubit generator with diagonal Hamiltonian")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--h0", type=float, default=0.0)
    p.add_argument("--h3", type=float, default=0.0)
    p.add_argument("--write-problem", type=Path, default=None)
    return parser


# -- command implementations: each returns (report dict, exit code) -----------------------------


def _state(problem):
    if problem.rho is not None:
        return problem.rho, "given"
    return find_invariant_state(problem.generator, problem.tol), "solved"


def _cmd_normalize(args):
    prob = io.load_problem(args.problem, args.tol)
    rho, source = _state(prob)
    gen, log = normalize(prob.generator, rho, prob.tol)
    if args.write_problem:
        io.save_problem(args.write_problem, gen, rho, prob.theta, prob.tol)
    return {"state_source": source, "normalization": log.as_dict(), "problem": io.problem_to_dict(gen, rho, prob.theta)}, EXIT_PASS


def _cmd_invariant_state(args):
    prob = io.load_problem(args.problem, args.tol)
    rho = find_invariant_state(prob.generator, prob.tol)
    return {
        "rho": io.encode_matrix(rho.rho),
        "eigenvalues": [float(w) for w in rho.eigenvalues],
        "invariance_residual": verify_invariance(prob.generator, rho),
    }, EXIT_PASS


def _cmd_dualize(args):
    prob = io.load_problem(args.problem, args.tol)
    rho, source = _state(prob)
    gen, log = normalize(prob.generator, rho, prob.tol)
    pair = dual_generator(gen, rho, prob.tol)
    if args.write_problem:
        io.save_problem(args.write_problem, pair.dual, rho, prob.theta, prob.tol)
    return {
        "state_source": source,
        "normalization": log.as_dict(),
        "dual": io.problem_to_dict(pair.dual),
        "dual_relation_residual": verify_dual_relation(pair, rho),
    }, EXIT_PASS


def run_checks(gen, rho, theta, conditions, tol) -> dict:
    runners = {
        "kms": lambda: balance.check_kms_symmetric(gen, rho, tol),
        "sqdb": lambda: balance.check_sqdb(gen, rho, tol),
        "sqdb-theta": lambda: balance.check_sqdb_theta(gen, rho, theta, tol),
    }
    return {c: runners[c]() for c in conditions}


def _cmd_check(args):
    prob = io.load_problem(args.problem, args.tol)
    rho, source = _state(prob)
    if args.strict:
        require_special(prob.generator, rho, prob.tol)
        gen, log = prob.generator, None
    else:
        gen, log = normalize(prob.generator, rho, prob.tol)
    conditions = CHECKS if args.condition == "all" else (args.condition,)
    reports = run_checks(gen, rho, prob.theta, conditions, prob.tol)
    out = {
        "state_source": source,
        "normalization": log.as_dict() if log else None,
        "verdicts": {c: r.verdict for c, r in reports.items()},
        "checks": {c: r.as_dict() for c, r in reports.items()},
    }
    return out, EXIT_PASS if all(reports.values()) else EXIT_FAIL


def _cmd_oracle(args):
    prob = io.load_problem(args.problem, args.tol)
    rho, source = _state(prob)
    defect = balance.semigroup_oracle(prob.generator, rho, args.condition, args.t, prob.theta, prob.tol)
    holds = defect <= balance.ORACLE_THRESHOLD
    return {
        "state_source": source,
        "condition": args.condition,
        "t": list(args.t),
        "defect": defect,
        "threshold": balance.ORACLE_THRESHOLD,
        "verdicts": {args.condition: holds},
    }, EXIT_PASS if holds else EXIT_FAIL


def _cmd_evolve(args):
    prob = io.load_problem(args.problem, args.tol)
    data = io.read_json(args.x)
    x = io.decode_matrix(data["x"] if isinstance(data, dict) else data, "x")
    y = evolve(prob.generator, x, args.t)
    return {"t": args.t, "x": io.encode_matrix(x), "result": io.encode_matrix(y)}, EXIT_PASS


def _complex(value, name):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise io.ProblemFileError(f"{name}: complex values are [re, im] pairs")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def _qubit_report(gen, rho, theta, tol, args, extra):
    if args.write_problem:
        io.save_problem(args.write_problem, gen, rho, theta, tol)
    rep = balance.check_sqdb_theta(gen, rho, theta, tol)
    out = dict(extra)
    out.update({
        "problem": io.problem_to_dict(gen, rho, theta),
        "verdicts": {"sqdb-theta": rep.verdict},
        "checks": {"sqdb-theta": rep.as_dict()},
    })
    return out, EXIT_PASS if rep else EXIT_FAIL


_QUBIT_FIELDS = {"nu", "r1", "r2", "zeta1", "zeta2", "r3", "v3", "v1_free", "r3_phase", "allow_degenerate"}


def _cmd_qubit(args):
    data = io.read_json(args.params)
    if not isinstance(data, dict):
        raise io.ProblemFileError("parameter file must hold a JSON object")
    unknown = set(data) - _QUBIT_FIELDS
    if unknown:
        raise io.ProblemFileError(f"unknown parameters: {sorted(unknown)}")
    if "nu" not in data:
        raise io.ProblemFileError("missing parameter 'nu'")
    kwargs = {}
    for k, v in data.items():
        if k in ("zeta1", "zeta2", "r3_phase"):
            kwargs[k] = _complex(v, k)
        elif k == "allow_degenerate":
            kwargs[k] = bool(v)
        else:
            kwargs[k] = float(v)
    params = qubit.QubitParams(case_tag=args.case, **kwargs)
    gen, rho, theta = qubit.build_standard_form(params)
    tol = resolve_tol(gen.tol).replace(eq_tol=args.tol)
    return _qubit_report(gen, rho, theta, tol, args, {"case": args.case, "v1": params.v1, "v2": params.v2})


def _cmd_qubit_qdb(args):
    gen, rho, theta = qubit.build_qdb_theta_form(args.nu, args.lam, args.mu, args.eta, args.h0, args.h3)
    tol = resolve_tol(gen.tol).replace(eq_tol=args.tol)
    return _qubit_report(gen, rho, theta, tol, args, {})


COMMANDS = {
    "normalize": _cmd_normalize,
    "invariant-state": _cmd_invariant_state,
    "dualize": _cmd_dualize,
    "check": _cmd_check,
    "oracle": _cmd_oracle,
    "evolve": _cmd_evolve,
    "qubit": _cmd_qubit,
    "qubit-qdb": _cmd_qubit_qdb,
}


# -- output ----------------------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def format_human(report: dict) -> str:
    lines = [f"command: {' '.join(report['argv'])}", f"status: {report['status']}"]
    if "error" in report:
        lines.append(f"error: {report['error']['type']}: {report['error']['message']}")
    for name, verdict in (report.get("verdicts") or {}).items():
        lines.append(f"{name}: {'PASS' if verdict else 'FAIL'}")
        check = (report.get("checks") or {}).get(name)
        if check:
            for key, val in check["residuals"].items():
                mark = "ok" if key not in check["failed"] else "FAILED"
                lines.append(f"    {key:<16} {val:.3e}  (threshold {check['thresholds'][key]:.3e}) {mark}")
            if "c" in check:
                lines.append(f"    c = {check['c']:.6g}")
    norm = report.get("normalization")
    if norm:
        lines.append(f"normalization: {norm['kraus_in']} -> {norm['kraus_out']} Kraus operators, "
                     f"superoperator distance {norm['superoperator_distance']:.2e}")
    for key in ("defect", "invariance_residual", "dual_relation_residual"):
        if key in report:
            lines.append(f"{key}: {report[key]:.3e}")
    return "\n".join(lines)


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    report = {"argv": argv}
    out_path = None
    code = EXIT_INPUT
    try:
        args = build_parser().parse_args(argv)
        out_path = args.out
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            body, code = COMMANDS[args.command](args)
        report.update(body)
        if caught:
            report["warnings"] = [str(w.message) for w in caught]
    except _UsageError as exc:
        report["error"] = {"type": "UsageError", "message": str(exc)}
    except (KmsBalanceError, ValueError, KeyError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    report["status"] = {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_INPUT: "input-error"}[code]
    report["elapsed_seconds"] = time.perf_counter() - start
    report = _jsonable(report)
    print(format_human(report))
    if out_path is not None:
        out_path.write_text(json.dumps(report, indent=2) + "\n")
    return code


def main() -> None:
    sys.exit(run())
