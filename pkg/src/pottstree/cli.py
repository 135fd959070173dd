"""Command-line front end.

Usage:
    pottstree ti --q 3 --k 3 --theta 3
    pottstree ti --q 3 --k 3 --theta-critical-for 1 --verify-depth 1
    pottstree periodic --q 3 --k 3 --theta 0.2 --m 1
    pottstree periodic --q 4 --k 5 --theta 0.2 --count
    pottstree periodic --q 4 --k 5 --theta 0.2 --m 2 --profile h.dat --grid 1000
    pottstree sweep --q 3 --k 3 --theta-min 2 --theta-max 3 --steps 101 --out sweep.csv

Exit codes: 0 success, 1 parameter error, 2 count/check mismatch (unless
--no-strict), 3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import gibbs, periodic, poly, ti
from .model import ZERO_TOL, ModelParams
from .report import RunReport, write_profile, write_table

EXIT_OK, EXIT_PARAM, EXIT_MISMATCH, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULT_AF_THETA = 0.2


class ParamError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def _params_echo(p: ModelParams) -> dict:
    return {"q": p.q, "k": p.k, "theta": p.theta, "coupling": p.coupling.value}


def _settings(**extra) -> dict:
    return {
        "zero_tol": ZERO_TOL,
        "dedup_tol": ti.DEDUP_TOL,
        "theta_cr_tol": ti.THETA_CR_TOL,
        "cross_check_tol": poly.CROSS_TOL,
        "grid_panels": poly.GRID_PANELS,
        **extra,
    }


# -- ti ---------------------------------------------------------------------

def _critical_table(q: int, k: int, report: RunReport) -> list[dict]:
    if k != 3 or q < 3:
        report.warnings.append("closed-form theta_cr is available for k = 3, q >= 3 only")
        return []
    rows = []
    for m in range(1, q):
        c = ti.critical_theta(q, m)
        rows.append({
            "m": m,
            "theta_cr": c.theta_cr,
            "theta_cr_tangency": c.theta_cr_tangency,
            "agreement": c.agreement,
            "x_double_root": c.x_double_root,
            "x_double_root_oracle": c.ferrari.oracle,
            "alpha0": c.ferrari.alpha0,
            "ferrari_branch": c.ferrari.branch,
            "flags": list(c.ferrari.flags),
        })
    return rows


def run_ti(args) -> RunReport:
    if args.theta_critical_for is not None:
        if args.k != 3:
            raise ParamError("--theta-critical-for needs k = 3")
        if not 1 <= args.theta_critical_for <= args.q - 1:
            raise ParamError(f"--theta-critical-for must lie in [1, q-1 = {args.q - 1}]")
        theta = ti.critical_theta(args.q, args.theta_critical_for).theta_cr
    else:
        theta = args.theta
    params = ModelParams(args.q, args.k, theta)
    report = RunReport("ti", _params_echo(params), _settings(verify_depth=args.verify_depth))
    if args.theta_critical_for is not None:
        report.params["theta_source"] = f"theta_cr(m={args.theta_critical_for}, q={args.q})"

    report.results["critical_theta"] = _critical_table(params.q, params.k, report)
    classes = []
    for m in range(1, params.q):
        sols = ti.solve_class(params, m)
        classes.append({
            "m": m,
            "criticality": sols[0].criticality,
            "solutions": [
                {"x_root": s.x_root, "z": s.z, "residual": s.residual, "multiplicity": s.multiplicity}
                for s in sols
            ],
        })
    report.results["classes"] = classes

    enum = ti.enumerate_ti(params)
    report.results["solutions"] = [
        {"z": list(v.z), "residual": r} for v, r in zip(enum.vectors, enum.residuals)
    ]
    report.results["max_residual"] = enum.max_residual
    report.warnings.extend(enum.warnings)
    stab = ti.stability_threshold(params)
    if stab is not None and abs(params.theta - stab) <= ti.THETA_CR_TOL:
        report.warnings.append(f"theta is at (k+q-1)/(k-1) = {stab}: a class root coincides with z = 1")
    report.add_count("ti_solutions", enum.total_count_with_permutations, ti.predicted_ti_count(params))
    report.add_check("residuals_below_tol", enum.max_residual < ZERO_TOL, max_residual=enum.max_residual)

    if args.verify_depth:
        verdicts = []
        for v in enum.vectors:
            viol = gibbs.check_compatibility(params, gibbs.FieldAssignment.constant(v), args.verify_depth)
            verdicts.append({"z": list(v.z), "violation": viol, "pass": viol < ZERO_TOL})
        report.results["oracle"] = {"depth": args.verify_depth, "tree": "rooted, k children per vertex",
                                    "verdicts": verdicts}
        report.add_check("oracle_compatibility", all(v["pass"] for v in verdicts))
    return report


# -- periodic ---------------------------------------------------------------

def _class_entry(params: ModelParams, m: int) -> tuple[dict, periodic.ClassCheck]:
    chk = periodic.check_class(params, m)
    w = chk.window
    entry = {
        "m": m,
        "formal": m == params.q,
        "window": {"theta_1": w.theta_1, "theta_2": w.theta_2},
        "critical_points": list(w.critical_points),
        "descartes_bound": w.descartes_bound,
        "solutions": [
            {"x": s.x, "y": s.y, "kind": s.kind, "residuals": list(s.residuals)} for s in chk.solutions
        ],
        "found": chk.found,
        "predicted": chk.predicted,
        "match": chk.match,
    }
    return entry, chk


def run_periodic(args) -> RunReport:
    theta = args.theta
    defaulted = theta is None
    if defaulted:
        theta = DEFAULT_AF_THETA
    params = ModelParams(args.q, args.k, theta)
    bar = periodic.theta_bar_cr(params.q, params.k)
    report = RunReport("periodic", _params_echo(params), _settings(grid=args.grid, inset=periodic.INSET))
    report.results["theta_bar_cr"] = bar
    if defaulted:
        report.warnings.append(f"--theta not given; defaulted to {DEFAULT_AF_THETA} "
                               "(a value below theta_bar_cr for the reference profiles)")
    if not params.antiferromagnetic:
        report.warnings.append("theta > 1: period-two solving applies to 0 < theta < 1 only; "
                               "threshold reported, nothing solved")
        if args.count or args.profile:
            raise ParamError("--count/--profile need 0 < theta < 1")
        return report
    if params.k < 3 or params.q < 3:
        raise ParamError(f"period-two solving needs k >= 3 and q >= 3 (k={params.k}, q={params.q})")

    report.results["h_prime_at_1"] = periodic.h_prime_at_one(params)
    ms = range(1, params.q + 1) if args.all_m else [args.m]
    classes = []
    for m in ms:
        if not 1 <= m <= params.q:
            raise ParamError(f"--m must lie in [1, q = {params.q}]")
        entry, chk = _class_entry(params, m)
        classes.append(entry)
        report.add_count(f"class_m{m}_roots", chk.found, chk.predicted)
        worst = max(s.max_residual for s in chk.solutions)
        report.add_check(f"class_m{m}_residuals", worst < ZERO_TOL, max_residual=worst)
        if m == params.q:
            report.warnings.append("class m = q is formal: it has no normalized field representative")
    report.results["classes"] = classes

    if args.count:
        cnt = periodic.count_periodic_measures(params)
        report.results["count"] = {
            "total": cnt.total,
            "predicted": cnt.predicted,
            "breakdown": [
                {"m": b.m, "multiplicity": b.multiplicity, "period_two_solutions": len(b.period_two),
                 "contribution": b.contribution, "formal": b.formal,
                 "pairs": [[s.x, s.y] for s in b.period_two]}
                for b in cnt.breakdown
            ],
            "distinct_normalized_fields": len(cnt.distinct_fields),
            "distinct_max_residual": cnt.distinct_max_residual,
        }
        report.warnings.extend(cnt.warnings)
        report.add_count("period_two_measures", cnt.total, cnt.predicted)

    if args.profile:
        m = ms[0]
        prof = periodic.emit_h_profile(params, m, args.grid)
        header = {**_params_echo(params), "m": m, "grid": args.grid, "epsilon": prof.epsilon,
                  "theta_1": prof.window[0], "theta_2": prof.window[1], "theta_bar_cr": bar,
                  "theta_defaulted": defaulted}
        write_profile(args.profile, header, prof.x, prof.h)
        report.results["profile"] = {"file": str(args.profile), "m": m, "rows": len(prof.x),
                                     "sign_changes": prof.sign_changes(),
                                     "h_first": float(prof.h[0]), "h_last": float(prof.h[-1])}
    return report


# -- sweep ------------------------------------------------------------------

def sweep_row(q: int, k: int, theta: float) -> dict:
    params = ModelParams(q, k, theta)
    row = {"theta": theta, "ti_count": ti.enumerate_ti(params).total_count_with_permutations}
    if params.antiferromagnetic and k >= 3 and q >= 3:
        for m in range(1, q):
            row[f"periodic_m{m}"] = len(periodic.solve_periodic_class(params, m))
        row["periodic_count"] = row["periodic_m1"]
    return row


def transitions(thetas, counts) -> list[dict]:
    out = []
    for i in range(1, len(thetas)):
        a, b = counts[i - 1], counts[i]
        if a is None or b is None or a == b:
            continue
        out.append({"theta_left": thetas[i - 1], "theta_right": thetas[i], "from": a, "to": b})
    return out


def _localized(value: float, trans: list[dict]) -> bool:
    return any(t["theta_left"] <= value <= t["theta_right"] for t in trans)


def run_sweep(args) -> RunReport:
    if args.theta_min <= 0 or args.theta_max <= 0:
        raise ParamError("theta range must be positive")
    if args.theta_max < args.theta_min:
        raise ParamError("--theta-max must be >= --theta-min")
    if args.steps < 1:
        raise ParamError("--steps must be >= 1")
    ModelParams(args.q, args.k, 2.0)  # validates q, k
    grid = [float(t) for t in np.linspace(args.theta_min, args.theta_max, args.steps)]
    if args.theta_min == args.theta_max:
        grid = grid[:1]
    report = RunReport("sweep", {"q": args.q, "k": args.k, "theta_min": args.theta_min,
                                 "theta_max": args.theta_max, "steps": len(grid)}, _settings())
    skipped = [t for t in grid if t == 1.0]
    if skipped:
        report.warnings.append("theta = 1 skipped (no interaction)")
    thetas = [t for t in grid if t != 1.0]
    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(lambda t: sweep_row(args.q, args.k, t), thetas))

    cols = ["theta", "ti_count", "periodic_count"] + [f"periodic_m{m}" for m in range(1, args.q)]
    table = [[r.get(c, "NA") for c in cols] for r in rows]
    if args.out:
        write_table(args.out, {**report.params, "periodic_count": "solutions on I_1 (NA for theta > 1)"},
                    cols, table)
        report.results["table"] = str(args.out)

    ti_tr = transitions(thetas, [r["ti_count"] for r in rows])
    per_tr = transitions(thetas, [r.get("periodic_count") for r in rows])
    report.results["ti_transitions"] = ti_tr
    report.results["periodic_transitions"] = per_tr
    report.results["rows"] = rows

    lo, hi = thetas[0] if thetas else 0, thetas[-1] if thetas else 0
    if args.k == 3 and args.q >= 3:
        crits = sorted({round(ti.critical_theta(args.q, m).theta_cr, 12) for m in range(1, args.q)})
        for tc in crits:
            if lo <= tc <= hi:
                report.add_check("theta_cr_localized", _localized(tc, ti_tr), theta_cr=tc)
    stab = (args.k + args.q - 1) / (args.k - 1) if args.k > 1 else None
    if stab is not None and lo <= stab <= hi:
        report.results["stability_threshold"] = stab
        report.warnings.append(f"class roots cross z = 1 at theta = (k+q-1)/(k-1) = {stab}; "
                               "the TI count dips there")
    bar = periodic.theta_bar_cr(args.q, args.k)
    if 0 < bar < 1 and lo <= bar <= hi and args.k >= 3 and args.q >= 3:
        report.add_check("theta_bar_cr_localized", _localized(bar, per_tr), theta_bar_cr=bar)
    return report


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pottstree", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ti", help="translation-invariant solutions")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta", type=float)
    g.add_argument("--theta-critical-for", type=int, metavar="M")
    p.add_argument("--verify-depth", type=int, default=0, metavar="N")
    p.add_argument("--out", type=Path)
    p.add_argument("--no-strict", action="store_true")

    p = sub.add_parser("periodic", help="period-two solutions on invariant sets")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--theta", type=float)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--all-m", action="store_true")
    p.add_argument("--count", action="store_true")
    p.add_argument("--profile", type=Path)
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--no-strict", action="store_true")

    p = sub.add_parser("sweep", help="solution counts over a theta grid")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--theta-min", type=float, required=True)
    p.add_argument("--theta-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--out", type=Path)
    p.add_argument("--no-strict", action="store_true")
    return parser


RUNNERS = {"ti": run_ti, "periodic": run_periodic, "sweep": run_sweep}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = RUNNERS[args.command](args)
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    text = report.dumps()
    out = getattr(args, "out", None)
    if args.command == "ti" and out:
        Path(out).write_text(text + "\n")
    print(text)
    if not args.no_strict and not report.all_counts_match:
        return EXIT_MISMATCH
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
