"""Command-line interface.

Subcommands mirror the library surface: ``pinv``, ``check``, ``update``,
``bounds``, ``rol``, ``gen``, and ``verify``. Every run prints a structured
report (JSON under ``--json``) and exits 0 on success, 1 on a hypothesis
refusal or verification failure, 2 on usage or I/O errors. Default
tolerances can be overridden by flags or by PINVPERTURB_TOL_ABS,
PINVPERTURB_TOL_REL, PINVPERTURB_RANK_REL, PINVPERTURB_MARGIN.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import mmio
from .errors import (
    HypothesisRefusal,
    InvariantViolation,
    MatrixMarketError,
    SingularMatrixError,
)
from .generators import (
    GenSpec,
    adversarial_pair,
    random_operator,
    random_relative_perturbation,
    s_alpha,
)
from .hypotheses import check_stewart_hypotheses
from .linalg import Tolerances, singular_values, spectral_norm
from .perturb import (
    error_bound_lambda2_zero,
    error_bound_stewart,
    gamma_continuity_bound,
    neumann_pinv,
    norm_bounds_ding_huang,
    update_relative_surjective,
    update_stewart,
)
from .pinv import pseudoinverse, reduced_min_modulus, verify_mp_axioms
from .report import Report, serialize_report
from .reverse_order import reverse_order_pinv
from .verify import run_verification

_ENV_PREFIX = "PINVPERTURB_"


def _resolve_tolerances(args) -> Tolerances:
    def pick(flag_value, env_suffix, default):
        if flag_value is not None:
            return flag_value
        raw = os.environ.get(_ENV_PREFIX + env_suffix)
        if raw is not None:
            return float(raw)
        return default

    base = Tolerances()
    return Tolerances(
        rank_rel=pick(args.rank_rel, "RANK_REL", base.rank_rel),
        eq_abs=pick(args.tol_abs, "TOL_ABS", base.eq_abs),
        eq_rel=pick(args.tol_rel, "TOL_REL", base.eq_rel),
        margin_strict=pick(args.margin, "MARGIN", base.margin_strict),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinvperturb",
        description="Certified pseudoinverse perturbation toolkit on Matrix Market files.",
    )
    parser.add_argument("--tol-abs", type=float, default=None,
                        help="absolute equality tolerance (default 1e-10)")
    parser.add_argument("--tol-rel", type=float, default=None,
                        help="relative equality tolerance (default 1e-10)")
    parser.add_argument("--rank-rel", type=float, default=None,
                        help="relative rank cutoff factor (default machine epsilon)")
    parser.add_argument("--margin", type=float, default=None,
                        help="strictness margin for norm conditions (default 1e-8)")
    parser.add_argument("--json", action="store_true",
                        help="emit the report (or error object) as JSON on stdout")
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed for generators and verification")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pinv", help="pseudoinverse, gamma, and axiom report")
    p.add_argument("t", metavar="T.mtx")
    p.add_argument("-o", "--output", default=None, help="write the pseudoinverse here")
    p.add_argument("--format", choices=("array", "coordinate"), default="array")

    p = sub.add_parser("check", help="hypothesis report for a perturbation pair")
    p.add_argument("t", metavar="T.mtx")
    p.add_argument("s", metavar="S.mtx")

    p = sub.add_parser("update", help="closed-form perturbed pseudoinverse")
    p.add_argument("t", metavar="T.mtx")
    p.add_argument("s", metavar="S.mtx")
    p.add_argument("--method", choices=("stewart", "relative", "neumann"), required=True)
    p.add_argument("--lambda1", type=float, default=None)
    p.add_argument("--lambda2", type=float, default=0.0)
    p.add_argument("--eps-series", type=float, default=None)
    p.add_argument("--max-terms", type=int, default=10_000)
    p.add_argument("-o", "--output", default=None, help="write the updated pseudoinverse")
    p.add_argument("--format", choices=("array", "coordinate"), default="array")

    p = sub.add_parser("bounds", help="all applicable a-priori bounds vs measured truth")
    p.add_argument("t", metavar="T.mtx")
    p.add_argument("s", metavar="S.mtx")

    p = sub.add_parser("rol", help="reverse-order law for a factored operator")
    p.add_argument("f", metavar="F.mtx")
    p.add_argument("g", metavar="G.mtx")
    p.add_argument("-o", "--output", default=None, help="write the reverse-order pinv")
    p.add_argument("--format", choices=("array", "coordinate"), default="array")

    p = sub.add_parser("gen", help="write certified fixture matrices")
    gsub = p.add_subparsers(dest="what", required=True)

    g = gsub.add_parser("operator", help="random operator with prescribed spectrum")
    g.add_argument("--rows", type=int, required=True)
    g.add_argument("--cols", type=int, required=True)
    g.add_argument("--rank", type=int, default=None, help="defaults to full rank")
    g.add_argument("--gamma", type=float, default=1.0,
                   help="smallest nonzero singular value")
    g.add_argument("--norm", type=float, default=1.0, help="largest singular value")
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--format", choices=("array", "coordinate"), default="array")

    g = gsub.add_parser("salpha", help="Stewart-certified perturbation of T")
    g.add_argument("-t", dest="t", required=True, metavar="T.mtx")
    g.add_argument("--alpha", type=float, default=None,
                   help="step in (0, 2/|pinv(T)|); defaults to the midpoint")
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--format", choices=("array", "coordinate"), default="array")

    g = gsub.add_parser("relperturb", help="relative-bound-certified perturbation")
    g.add_argument("-t", dest="t", required=True, metavar="T.mtx")
    g.add_argument("--lambda1", type=float, required=True)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--format", choices=("array", "coordinate"), default="array")

    g = gsub.add_parser("adversarial", help="pair violating exactly one hypothesis")
    g.add_argument("--kind", required=True,
                   choices=("range_violation", "null_violation", "norm_violation"))
    g.add_argument("--out-t", required=True)
    g.add_argument("--out-s", required=True)
    g.add_argument("--format", choices=("array", "coordinate"), default="array")

    p = sub.add_parser("verify", help="run the full randomized invariant suite")
    p.add_argument("--trials", type=int, default=200,
                   help="randomized trials per suite (default 200)")
    p.add_argument("--seed", dest="verify_seed", type=int, default=None,
                   help="override the master seed for this run")
    p.add_argument("--max-dim", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1,
                   help="concurrent trial workers; results are job-count independent")

    return parser


def _axiom_dict(ax) -> dict:
    return {
        "residual_tTt": ax.residual_tTt,
        "residual_tdTtd": ax.residual_tdTtd,
        "residual_sym1": ax.residual_sym1,
        "residual_sym2": ax.residual_sym2,
        "passed": ax.passed,
    }


def _cmd_pinv(args, tol):
    t = mmio.read_matrix(args.t)
    pr = pseudoinverse(t, tol)
    ax = verify_mp_axioms(t, pr.pinv, tol)
    if args.output:
        mmio.write_matrix(pr.pinv, args.output, format=args.format)
    report = Report(
        command="pinv",
        inputs={"t": args.t, "output": args.output},
        verdicts={
            "rows": t.shape[0],
            "cols": t.shape[1],
            "rank": pr.rank,
            "gamma": pr.gamma,
            "sigma": [float(x) for x in pr.sigma],
            "norm_pinv": spectral_norm(pr.pinv),
            "axioms": _axiom_dict(ax),
        },
    )
    return report, 0 if ax.passed else 1


def _cmd_check(args, tol):
    t = mmio.read_matrix(args.t)
    s = mmio.read_matrix(args.s)
    rep = check_stewart_hypotheses(t, s, tol)
    verdicts = {
        "norm_TdS": rep.norm_TdS,
        "norm_STd": rep.norm_STd,
        "norm_S": rep.norm_S,
        "gamma_T": rep.gamma_T,
        "range_incl_residual": rep.range_incl_residual,
        "null_incl_residual": rep.null_incl_residual,
        "ttds_residual": rep.ttds_residual,
        "stdt_residual": rep.stdt_residual,
        "lambda1_min": rep.lambda1_min,
        "verdict_stewart": rep.verdict_stewart,
        "verdict_norm_gamma": rep.verdict_norm_gamma,
        "verdict_relative": rep.verdict_relative,
    }
    any_certified = rep.verdict_stewart or rep.verdict_norm_gamma or rep.verdict_relative
    report = Report(command="check", inputs={"t": args.t, "s": args.s}, verdicts=verdicts)
    return report, 0 if any_certified else 1


def _update_verdicts(res) -> dict:
    return {
        "method": res.method,
        "bound_apriori": res.bound_apriori,
        "oracle_discrepancy": res.oracle_discrepancy,
        "norms_used": dict(res.norms_used),
    }


def _cmd_update(args, tol):
    t = mmio.read_matrix(args.t)
    s = mmio.read_matrix(args.s)
    inputs = {"t": args.t, "s": args.s, "method": args.method}
    if args.method == "stewart":
        res = update_stewart(t, s, tol)
        verdicts = _update_verdicts(res)
        out = res.pinv_updated
    elif args.method == "relative":
        if args.lambda1 is None:
            raise ValueError("--lambda1 is required for --method relative")
        inputs.update({"lambda1": args.lambda1, "lambda2": args.lambda2})
        res = update_relative_surjective(t, s, args.lambda1, args.lambda2, tol)
        verdicts = _update_verdicts(res)
        out = res.pinv_updated
    else:
        inputs.update({"eps_series": args.eps_series, "max_terms": args.max_terms})
        res = neumann_pinv(t, s, eps_series=args.eps_series,
                           max_terms=args.max_terms, tol=tol)
        verdicts = {
            "method": "neumann_series",
            "terms_used": res.terms_used,
            "last_term_norm": res.last_term_norm,
            "ratio": res.ratio,
            "residual_bound": res.residual_bound,
            "converged": res.converged,
        }
        out = res.pinv_s
    if args.output:
        mmio.write_matrix(out, args.output, format=args.format)
        inputs["output"] = args.output
    return Report(command="update", inputs=inputs, verdicts=verdicts), 0


def _cmd_bounds(args, tol):
    t = mmio.read_matrix(args.t)
    s = mmio.read_matrix(args.s)
    pr_t = pseudoinverse(t, tol)
    pr_sum = pseudoinverse(t + s, tol)
    measured_diff = spectral_norm(pr_sum.pinv - pr_t.pinv)
    measured_norm = spectral_norm(pr_sum.pinv)
    verdicts = {
        "measured_pinv_diff": measured_diff,
        "measured_pinv_norm": measured_norm,
    }
    failures = 0

    def record(name, entry, ok):
        nonlocal failures
        verdicts[name] = entry
        if entry["applicable"] and not ok:
            failures += 1

    try:
        bound = error_bound_stewart(t, s, tol)
        ok = measured_diff <= bound + tol.eq(bound)
        record("stewart", {"applicable": True, "bound": bound,
                           "measured": measured_diff, "dominates": ok}, ok)
    except HypothesisRefusal as exc:
        record("stewart", {"applicable": False, "reason": str(exc)}, True)
    try:
        bound = error_bound_lambda2_zero(t, s, tol)
        ok = measured_diff <= bound + tol.eq(bound)
        record("lambda2_zero", {"applicable": True, "bound": bound,
                                "measured": measured_diff, "dominates": ok}, ok)
    except HypothesisRefusal as exc:
        record("lambda2_zero", {"applicable": False, "reason": str(exc)}, True)
    for case in ("injective", "surjective", "general"):
        try:
            db = norm_bounds_ding_huang(t, s, case, tol)
            entry = {
                "applicable": True,
                "pinv_norm_bound": db.pinv_norm_bound,
                "pinv_diff_bound": db.pinv_diff_bound,
                "measured_pinv_norm": db.measured_pinv_norm,
                "measured_pinv_diff": db.measured_pinv_diff,
                "dominates": True,
            }
            record(f"ding_huang_{case}", entry, True)
        except HypothesisRefusal as exc:
            record(f"ding_huang_{case}", {"applicable": False, "reason": str(exc)}, True)
    try:
        achieved, bound = gamma_continuity_bound(t, s, tol)
        ok = achieved <= bound + tol.eq(max(1.0, bound))
        record("gamma_continuity", {"applicable": True, "bound": bound,
                                    "measured": achieved, "dominates": ok}, ok)
    except HypothesisRefusal as exc:
        record("gamma_continuity", {"applicable": False, "reason": str(exc)}, True)

    report = Report(command="bounds", inputs={"t": args.t, "s": args.s}, verdicts=verdicts)
    return report, 0 if failures == 0 else 1


def _cmd_rol(args, tol):
    f = mmio.read_matrix(args.f)
    g = mmio.read_matrix(args.g)
    fp = reverse_order_pinv(f, g, tol)
    scale = max(
        spectral_norm(fp.pinv_oracle),
        spectral_norm(fp.pinv_reverse),
        spectral_norm(fp.pinv_closed_form),
    )
    agree = fp.max_pairwise_discrepancy <= tol.eq(scale)
    if args.output:
        mmio.write_matrix(fp.pinv_reverse, args.output, format=args.format)
    report = Report(
        command="rol",
        inputs={"f": args.f, "g": args.g, "output": args.output},
        verdicts={
            "product_shape": list(fp.a.shape),
            "max_pairwise_discrepancy": fp.max_pairwise_discrepancy,
            "three_way_agreement": agree,
        },
    )
    return report, 0 if agree else 1


def _cmd_gen(args, tol):
    inputs = {"what": args.what, "seed": args.seed}
    if args.what == "operator":
        rank = args.rank if args.rank is not None else min(args.rows, args.cols)
        spec = GenSpec(rows=args.rows, cols=args.cols, rank=rank,
                       gamma_target=args.gamma, norm_target=args.norm, seed=args.seed)
        m = random_operator(spec)
        mmio.write_matrix(m, args.output, format=args.format)
        sigma = singular_values(m)
        verdicts = {
            "written": args.output,
            "rank": rank,
            "achieved_norm": float(sigma[0]) if sigma.size else 0.0,
            "achieved_gamma": reduced_min_modulus(m, tol),
        }
    elif args.what == "salpha":
        t = mmio.read_matrix(args.t)
        alpha = args.alpha if args.alpha is not None else reduced_min_modulus(t, tol)
        s = s_alpha(t, alpha, tol)
        mmio.write_matrix(s, args.output, format=args.format)
        rep = check_stewart_hypotheses(t, s, tol)
        verdicts = {
            "written": args.output,
            "alpha": alpha,
            "norm_S": rep.norm_S,
            "verdict_stewart": rep.verdict_stewart,
        }
        inputs["t"] = args.t
    elif args.what == "relperturb":
        t = mmio.read_matrix(args.t)
        s = random_relative_perturbation(t, args.lambda1, args.seed)
        mmio.write_matrix(s, args.output, format=args.format)
        verdicts = {
            "written": args.output,
            "lambda1": args.lambda1,
            "norm_S": spectral_norm(s),
        }
        inputs["t"] = args.t
    else:
        t, s = adversarial_pair(args.kind, args.seed)
        mmio.write_matrix(t, args.out_t, format=args.format)
        mmio.write_matrix(s, args.out_s, format=args.format)
        verdicts = {"kind": args.kind, "written_t": args.out_t, "written_s": args.out_s}
        inputs["kind"] = args.kind
    return Report(command="gen", inputs=inputs, verdicts=verdicts), 0


def _cmd_verify(args, tol):
    seed = args.verify_seed if args.verify_seed is not None else args.seed
    verdicts, passed = run_verification(
        trials=args.trials, seed=seed, max_dim=args.max_dim, jobs=args.jobs, tol=tol
    )
    report = Report(
        command="verify",
        inputs={"trials": args.trials, "seed": seed,
                "max_dim": args.max_dim, "jobs": args.jobs},
        verdicts={"suites": verdicts, "all_passed": passed},
    )
    return report, 0 if passed else 1


_COMMANDS = {
    "pinv": _cmd_pinv,
    "check": _cmd_check,
    "update": _cmd_update,
    "bounds": _cmd_bounds,
    "rol": _cmd_rol,
    "gen": _cmd_gen,
    "verify": _cmd_verify,
}


def _print_tree(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)):
                print(f"{pad}{key}:")
                _print_tree(value, indent + 1)
            else:
                print(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(obj, list):
        print(pad + "[" + ", ".join(_scalar(v) for v in obj) + "]")
    else:
        print(pad + _scalar(obj))


def _scalar(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".10g")
    return str(value)


def _emit_error(args, exc, code: int) -> int:
    if getattr(args, "json", False):
        payload = {
            "command": getattr(args, "command", None),
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
    return code


def cli_dispatch(argv=None) -> int:
    """Parse arguments, run the command, print a report, return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code) if exc.code else 0

    start = time.perf_counter()
    try:
        tol = _resolve_tolerances(args)
        report, code = _COMMANDS[args.command](args, tol)
    except (HypothesisRefusal, SingularMatrixError, InvariantViolation) as exc:
        return _emit_error(args, exc, 1)
    except (MatrixMarketError, OSError, ValueError) as exc:
        return _emit_error(args, exc, 2)

    report.timings["total_ms"] = (time.perf_counter() - start) * 1e3
    report.tolerances_used = {
        "rank_rel": tol.rank_rel,
        "eq_abs": tol.eq_abs,
        "eq_rel": tol.eq_rel,
        "margin_strict": tol.margin_strict,
    }
    if args.json:
        print(serialize_report(report))
    else:
        print(f"command: {report.command}")
        _print_tree(report.verdicts)
        print(f"exit: {code}")
    return code


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
