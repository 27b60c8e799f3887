"""Command-line front end: ``genhilbert {moments,classify,apply,schatten,verify}``.

Exit codes: 0 when every invoked invariant holds, 1 when an invariant or a
numerical routine fails, 2 for unusable input (bad JSON, bad parameters).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .carleson import GridSpec, carleson_sup, log_carleson_sup, moment_carleson_sup, predict, zhao_K
from .errors import ConvergenceError, ParameterError, QuadratureError, RootFindingError
from .hardy import coeffs_from_json, coeffs_to_json, evaluate
from .measure import (QuadratureSpec, complete_monotonicity_margin, measure_from_json,
                      measure_to_json, moments_up_to)
from .operator import HankelTruncation, agreement_check, apply, integral_apply
from .schatten import DENSE_CAP, membership_verdict, schatten_report
from .verify import DEFAULT_SEED, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

CM_KMAX = 8
CM_TOL = 1e-12
NAIVE_CAP = 1024
MATVEC_TOL = 1e-12
AGREEMENT_TOL = 1e-8
FROBENIUS_TOL = 1e-10


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# input / output helpers


def _load_json(path: str, what: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{what} {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _load_measure(path):
    if path is None:
        raise InputError("--measure is required")
    try:
        return measure_from_json(_load_json(path, "measure spec"))
    except ParameterError as exc:
        raise InputError(f"measure spec {path}: {exc}") from exc


def _clean(obj):
    """Plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _quad(args) -> QuadratureSpec:
    try:
        return QuadratureSpec(budget=args.budget, tol=args.tol)
    except ParameterError as exc:
        raise InputError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands; each returns (text, ok)


def cmd_moments(args):
    mu = _load_measure(args.measure)
    if args.M < 0:
        raise InputError("--M must be >= 0")
    seq = moments_up_to(mu, args.M, _quad(args))
    v = seq.values
    kmax = min(CM_KMAX, args.M)
    margin = complete_monotonicity_margin(v, kmax) if kmax > 0 else 0.0
    # k-th differences can amplify per-moment quadrature error by 2^k
    tol = CM_TOL * v[0] + 2.0 ** kmax * seq.error_bound
    violations = seq.invariant_violations()
    if margin < -tol:
        violations.append("complete monotonicity")
    summary = {"kmax": kmax, "margin": margin, "tolerance": tol, "violations": violations}
    if args.format == "csv":
        text = _csv_text(["n", "value", "method"], [(n, v[n], seq.methods[n]) for n in range(len(v))])
        sys.stderr.write(json.dumps(_clean(summary), allow_nan=False) + "\n")
    else:
        text = dumps({"measure": measure_to_json(mu), "M": args.M, "values": v,
                      "methods": list(seq.methods), "error_bound": seq.error_bound,
                      "complete_monotonicity": summary})
    return text, not violations


def _concordant(a: str, b: str) -> bool:
    return {a, b} != {"finite", "divergent"}


def cmd_classify(args):
    mu = _load_measure(args.measure)
    q = _quad(args)
    if not args.s > 0 or args.alpha < 0:
        raise InputError("--s must be > 0 and --alpha >= 0")
    try:
        grid = GridSpec(args.grid_levels)
    except ParameterError as exc:
        raise InputError(str(exc)) from exc
    tail = carleson_sup(mu, args.s, grid, q)
    reports = {"carleson": tail}
    if args.alpha > 0:
        reports["log_carleson"] = log_carleson_sup(mu, args.alpha, args.s, grid, q)
    reports["zhao"] = zhao_K(mu, args.alpha, args.s, grid, q)
    mom = moment_carleson_sup(moments_up_to(mu, args.M, q), args.s)
    concordant = _concordant(tail.verdict, mom.verdict)
    verdicts = {name: r.to_dict() for name, r in reports.items()}
    verdicts["moment"] = {"s": mom.s, "sup_value": mom.sup_value, "argmax": mom.argmax,
                          "slope": mom.slope, "verdict": mom.verdict}
    record = {"measure": measure_to_json(mu), "grid_levels": grid.levels, "reports": verdicts,
              "tail_moment_concordant": concordant}
    if args.p is not None and args.q is not None:
        record["predict"] = predict(args.p, args.q, mu).to_dict()
    primary = reports["log_carleson" if args.alpha > 0 else "carleson"]
    if args.format == "csv":
        rows = [(j, a, val) for j, (a, val) in enumerate(zip(primary.grid, primary.values))]
        text = _csv_text(["j", "a_j", "value"], rows) + json.dumps(_clean(record), allow_nan=False) + "\n"
    else:
        record["grid"] = primary.grid
        record["values"] = {name: r.values for name, r in reports.items()}
        text = dumps(record)
    return text, concordant


def _parse_z(items):
    out = []
    for s in items or ():
        try:
            out.append(complex(s.replace(" ", "")))
        except ValueError as exc:
            raise InputError(f"--z {s!r}: not a complex number") from exc
    return np.array(out, dtype=np.complex128)


def cmd_apply(args):
    mu = _load_measure(args.measure)
    q = _quad(args)
    if args.coeffs is None:
        raise InputError("--coeffs is required")
    try:
        a = coeffs_from_json(_load_json(args.coeffs, "coefficients"))
    except ParameterError as exc:
        raise InputError(f"coefficients {args.coeffs}: {exc}") from exc
    N = args.N if args.N is not None else max(4096, a.shape[0])
    if N < a.shape[0]:
        raise InputError(f"--N {N} is smaller than the coefficient count {a.shape[0]}")
    T = HankelTruncation.from_measure(mu, N, q)
    rep = apply(T, a, "both" if N <= NAIVE_CAP else "fast")
    agree = agreement_check(mu, a, q=q)
    ok = agree <= AGREEMENT_TOL and (rep.residual is None or rep.residual <= MATVEC_TOL)
    record = {"measure": measure_to_json(mu), "N": N, "method": rep.method,
              "fast_naive_residual": rep.residual, "agreement_error": agree}
    zs = _parse_z(args.z)
    if zs.size:
        if np.any(np.abs(zs) >= 1.0):
            raise InputError("--z points must satisfy |z| < 1")
        series, integral = evaluate(rep.output, zs), np.atleast_1d(integral_apply(mu, a, zs, q))
        record["points"] = [{"z": [z.real, z.imag], "series": [s.real, s.imag], "integral": [i.real, i.imag]}
                            for z, s, i in zip(zs, series, integral)]
    if args.format == "csv":
        text = _csv_text(["n", "re", "im"], [(n, c.real, c.imag) for n, c in enumerate(rep.output)])
        sys.stderr.write(json.dumps(_clean({k: v for k, v in record.items() if k != "measure"}),
                                    allow_nan=False) + "\n")
    else:
        record["output"] = coeffs_to_json(rep.output)
        text = dumps(record)
    return text, ok


def cmd_schatten(args):
    mu = _load_measure(args.measure)
    N = 1024 if args.N is None else args.N
    if N < 8 or N > DENSE_CAP or N % 8:
        raise InputError(f"--N must be a multiple of 8 in [8, {DENSE_CAP}]")
    if not args.p > 1.0:
        raise InputError("--p must be > 1")
    seq = moments_up_to(mu, 2 * N - 2, _quad(args))
    ladder = (N // 8, N // 4, N // 2, N)
    verdict = membership_verdict(mu, args.p, ladder, momseq=seq)
    rep = schatten_report(seq, args.p, N)
    frob = float(np.sum(rep.singular_values ** 2))
    frob_err = abs(frob / rep.frobenius_sq - 1.0) if rep.frobenius_sq > 0 else frob
    ok = frob_err <= FROBENIUS_TOL
    if args.format == "csv":
        rows = zip(verdict.ladder, verdict.schatten_partials, verdict.criterion_partials)
        text = _csv_text(["N", "schatten_partial", "criterion_partial"], rows)
    else:
        text = dumps({"measure": measure_to_json(mu), "report": rep.to_dict(),
                      "frobenius_rel_error": frob_err, "membership": verdict.to_dict()})
    return text, ok


def cmd_verify(args):
    results = run_suite(seed=args.seed, corrupt=args.corrupt, workers=args.workers)
    passed = all(r.passed for r in results)
    if args.format == "csv":
        text = _csv_text(["check", "passed"], [(r.name, str(r.passed).lower()) for r in results])
    else:
        text = dumps({"seed": args.seed, "corrupt": args.corrupt, "passed": passed,
                      "checks": [{"name": r.name, "passed": r.passed, "measured": r.measured} for r in results]})
    return text, passed


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--measure", metavar="PATH", help="measure spec (JSON)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--budget", type=int, default=4096, help="quadrature node budget")
    common.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")

    parser = argparse.ArgumentParser(prog="genhilbert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[common], help="moment sequence and monotonicity checks")
    p.add_argument("--M", type=int, default=64, help="highest moment order")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("classify", parents=[common], help="Carleson functionals and predicted operator class")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--grid-levels", type=int, default=14)
    p.add_argument("--M", type=int, default=4096, help="moments used by the moment functional")
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("apply", parents=[common], help="apply the Hankel truncation to coefficients")
    p.add_argument("--coeffs", metavar="PATH", help="JSON array of [re, im] pairs or reals")
    p.add_argument("--N", type=int, help="truncation size (default 4096)")
    p.add_argument("--z", action="append", help="evaluate both forms at this point (repeatable)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("schatten", parents=[common], help="singular values and S_p membership")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--N", type=int, help="largest truncation (default 1024); ladder N/8..N")
    p.set_defaults(func=cmd_schatten)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--corrupt", action="store_true", help="perturb one moment; the agreement check must fail")
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, ok = args.func(args)
    except InputError as exc:
        sys.stderr.write(f"genhilbert {args.command}: {exc}\n")
        return EXIT_INPUT
    except ParameterError as exc:
        sys.stderr.write(f"genhilbert {args.command}: invalid parameter: {exc}\n")
        return EXIT_INPUT
    except (QuadratureError, ConvergenceError, RootFindingError) as exc:
        sys.stderr.write(f"genhilbert {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    _emit(text, args.out)
    if not ok:
        sys.stderr.write(f"genhilbert {args.command}: invariant check failed\n")
    return EXIT_OK if ok else EXIT_FAIL
