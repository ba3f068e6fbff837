"""Command-line interface.

Subcommands: ingest, adf, fit, diagnose, irf, shocks, correlate, simulate,
run. Exit codes: 0 success, 1 usage error, 2 data error, 3 model-validity
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import DataError, EstimationError, IdentificationError, StationarityError
from .pipeline import load_config, run_pipeline
from .plots import write_irf_panel
from .series import (
    QuarterIndex,
    align_series,
    difference,
    dummy_deseasonalize,
    load_csv,
    log_transform,
    write_csv,
)
from .shocks import (
    ShockPanel,
    SubPeriod,
    build_correlation_report,
    combined_triangle_table,
    read_shock_csv,
    shock_volatility,
    write_shock_csv,
)
from .simulate import StructuralDgp, simulate
from .svar import compute_irf, identify_long_run, recover_shocks
from .unit_root import DeterministicSpec, integration_order
from .var import check_stability, fit_var, lag_exclusion_test, select_lag

_USAGE_EXIT = 1
_DATA_EXIT = 2
_MODEL_EXIT = 3


def _dump(obj, args) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _load_transformed(paths, args):
    """Load input CSVs and apply the shared --deseasonalize/--log/--diff flags."""
    out = []
    for p in paths:
        s = load_csv(p)
        if getattr(args, "deseasonalize", False):
            s = dummy_deseasonalize(s)
        if getattr(args, "log", False):
            s = log_transform(s)
        d = getattr(args, "diff", 0)
        if d:
            s = difference(s, d)
        out.append(s)
    return align_series(out)


def _fit_from_args(args):
    data = _load_transformed(args.inputs, args)
    if args.lags is not None:
        return fit_var(data, args.lags), None
    sel = select_lag(data, args.select_max)
    return fit_var(data, max(sel.modal, 1)), sel


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_ingest(args) -> int:
    s = load_csv(args.input)
    if args.deseasonalize:
        s = dummy_deseasonalize(s)
    if args.log:
        s = log_transform(s)
    if args.diff:
        s = difference(s, args.diff)
    if args.output:
        write_csv(s, args.output)
    else:
        sys.stdout.write("quarter,value\n")
        for q, v in zip(s.quarters(), s.values):
            sys.stdout.write(f"{q},{v!r}\n")
    return 0


def _cmd_adf(args) -> int:
    specs = [DeterministicSpec(x.strip()) for x in args.spec.split(",")]
    rows = []
    for path in args.inputs:
        s = load_csv(path)
        if args.log:
            s = log_transform(s)
        rep = integration_order(s, specs, max_order=args.max_order, lag=args.lag)
        decisive = rep.results[-1]
        rows.append(
            {
                "series": s.label,
                "order": rep.order,
                "statistic": decisive.statistic,
                "probability": decisive.p_value,
                "levels": [
                    {
                        "difference": d,
                        "statistic": r.statistic,
                        "probability": r.p_value,
                        "lag": r.lag_used,
                        "spec": r.spec.value,
                        "reject_at_5pct": r.reject_at_5pct,
                    }
                    for d, r in enumerate(rep.results)
                ],
            }
        )
    if args.format == "json":
        _dump(rows, args)
    else:
        print(f"{'series':<24}{'order':>6}{'ADF':>12}{'prob.':>10}")
        for r in rows:
            print(
                f"{r['series']:<24}{'I(%d)' % r['order']:>6}"
                f"{r['statistic']:>12.6f}{r['probability']:>10.4f}"
            )
    return 0


def _cmd_fit(args) -> int:
    model, sel = _fit_from_args(args)
    stability = check_stability(model)
    out = {
        "labels": list(model.labels),
        "start": str(model.start),
        "p": model.p,
        "t_eff": model.T_eff,
        "intercept": model.intercept.tolist(),
        "lag_coeffs": [A.tolist() for A in model.lag_coeffs],
        "sigma_ml": model.sigma_ml.tolist(),
        "sigma_df_adjusted": model.sigma_df_adjusted.tolist(),
        "stability": {"moduli": list(stability.moduli), "stable": stability.stable},
    }
    if sel is not None:
        out["lag_selection"] = {
            "chosen": dict(sorted(sel.chosen.items())),
            "modal": sel.modal,
            "rows": [
                {"lag": r.lag, "lr": r.lr, "fpe": r.fpe, "aic": r.aic, "sc": r.sc, "hq": r.hq}
                for r in sel.rows
            ],
            "exclusion_pvalues": {str(k): v for k, v in sorted(sel.exclusion_pvalues.items())},
        }
    if args.exclusion_lag is not None:
        excl = lag_exclusion_test(model, args.exclusion_lag)
        out["lag_exclusion"] = {
            "lag": excl.lag,
            "joint_stat": excl.joint_stat,
            "joint_pvalue": excl.joint_pvalue,
            "per_equation_pvalues": list(excl.per_equation_pvalues),
        }
    if args.format == "json":
        _dump(out, args)
    else:
        print(f"VAR({model.p}) on {', '.join(model.labels)}  T_eff={model.T_eff}")
        if sel is not None:
            print(f"lag choices {out['lag_selection']['chosen']}  modal={sel.modal}")
        print(f"stable={stability.stable}  max |root|={stability.moduli[0]:.6f}")
        for i, A in enumerate(model.lag_coeffs, start=1):
            print(f"A{i} = {np.array2string(A, precision=6)}")
    return 0


def _cmd_diagnose(args) -> int:
    from .diagnostics import run_diagnostics

    model, _ = _fit_from_args(args)
    sm = identify_long_run(model, sign_convention=args.sign_convention)
    diag = run_diagnostics(sm, model)
    out = {
        "normality_jarque_bera_joint_p": diag.jb.joint_pvalue,
        "homoskedasticity_white_p": diag.white.pvalue,
        "autocorrelation_lm": {str(e.lag): e.pvalue for e in diag.lm},
        "warnings": list(diag.warnings()),
    }
    if args.format == "json":
        _dump(out, args)
    else:
        print(f"{'test':<40}{'p-value':>10}")
        print(f"{'normality (Jarque-Bera, joint)':<40}{diag.jb.joint_pvalue:>10.4f}")
        print(f"{'homoskedasticity (White)':<40}{diag.white.pvalue:>10.4f}")
        for e in diag.lm:
            print(f"{f'autocorrelation (LM, lag {e.lag})':<40}{e.pvalue:>10.4f}")
        for w in diag.warnings():
            print(f"warning: {w}")
    return 0


def _cmd_irf(args) -> int:
    model, _ = _fit_from_args(args)
    sm = identify_long_run(model, sign_convention=args.sign_convention)
    irf = compute_irf(sm, model, args.horizon)
    out = {
        "horizon": irf.horizon,
        "responses": irf.responses.tolist(),
        "cumulative": irf.cumulative.tolist(),
        "B": sm.B.tolist(),
        "F": sm.F.tolist(),
    }
    if args.svg_dir:
        svg_dir = Path(args.svg_dir)
        svg_dir.mkdir(parents=True, exist_ok=True)
        files = []
        for idx, label in enumerate(model.labels):
            p = svg_dir / f"irf_{label}.svg"
            write_irf_panel(irf, idx, p, var_label=label, cumulative=args.cumulative)
            files.append(str(p))
        out["figures"] = files
    _dump(out, args)
    return 0


def _cmd_shocks(args) -> int:
    model, _ = _fit_from_args(args)
    sm = identify_long_run(model, sign_convention=args.sign_convention)
    shocks = recover_shocks(sm, model)
    if args.output:
        write_shock_csv(shocks, args.output)
    else:
        sys.stdout.write("quarter,u_demand,u_supply\n")
        q = shocks.start
        for d, s in zip(shocks.u_demand, shocks.u_supply):
            sys.stdout.write(f"{q},{d!r},{s!r}\n")
            q = q + 1
    return 0


def _parse_sub_period(text: str) -> SubPeriod:
    try:
        label, bounds = text.split("=", 1)
        start, end = bounds.split(":", 1)
    except ValueError:
        raise DataError(
            f"bad sub-period {text!r}; expected LABEL=YYYY-QN:YYYY-QN"
        ) from None
    return SubPeriod(label=label, start=QuarterIndex.parse(start), end=QuarterIndex.parse(end))


def _cmd_correlate(args) -> int:
    entries = {}
    for item in args.panel:
        if "=" not in item:
            raise DataError(f"bad panel entry {item!r}; expected LABEL=shocks.csv")
        label, path = item.split("=", 1)
        entries[label] = read_shock_csv(path)
    panel = ShockPanel(
        entries=entries,
        sub_periods=tuple(_parse_sub_period(t) for t in args.sub_period),
    )
    report = build_correlation_report(panel)
    out = {
        "labels": list(report.labels),
        "periods": {
            period: {
                "demand": mats["demand"].tolist(),
                "supply": mats["supply"].tolist(),
                "combined_lower_demand_upper_supply": combined_triangle_table(
                    mats["demand"], mats["supply"]
                ).tolist(),
            }
            for period, mats in report.periods.items()
        },
        "volatility": {
            period: shock_volatility(panel, period)
            for period in ["full"] + [sp.label for sp in panel.sub_periods]
        },
    }
    if args.format == "json":
        _dump(out, args)
    else:
        labels = report.labels
        for period, mats in report.periods.items():
            combined = combined_triangle_table(mats["demand"], mats["supply"])
            print(f"correlation {period} (lower triangle demand, upper supply)")
            print(" " * 12 + "".join(f"{l[:10]:>11}" for l in labels))
            for i, l in enumerate(labels):
                cells = "".join(f"{100 * combined[i, j]:>10.2f}%" for j in range(len(labels)))
                print(f"{l[:11]:<12}{cells}")
            print()
    return 0


def _cmd_simulate(args) -> int:
    dgp = StructuralDgp.from_long_run(
        lag_coeffs=(
            np.array([[0.5, 0.1], [0.1, 0.3]]),
            np.array([[0.2, 0.0], [0.0, 0.1]]),
        )[: args.dgp_lags],
        long_run=np.array([[0.0, 2.0], [2.0, 1.0]]),
        seed=args.seed,
    )
    start = QuarterIndex.parse(args.start)
    series, true_shocks = simulate(
        dgp, args.observations, burn_in=args.burn_in, start=start
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for s in series:
        write_csv(s, outdir / f"{s.label}.csv")
    write_shock_csv(true_shocks, outdir / "true_shocks.csv")
    print(
        json.dumps(
            {
                "out": str(outdir),
                "files": [f"{s.label}.csv" for s in series] + ["true_shocks.csv"],
                "observations": args.observations,
                "seed": args.seed,
                "true_impact": dgp.impact.tolist(),
                "true_long_run": dgp.long_run().tolist(),
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    result = run_pipeline(cfg)
    print(
        json.dumps(
            {
                "report": str(result.report_path),
                "failures": result.report["failures"],
                "exit_status": result.exit_status,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return result.exit_status


# ---------------------------------------------------------------------------
# parser

def _add_transform_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--log", action="store_true", help="log-transform inputs")
    p.add_argument("--diff", type=int, default=0, metavar="D", help="difference inputs D times")
    p.add_argument("--deseasonalize", action="store_true", help="quarterly-dummy deseasonalizer")


def _add_model_flags(p: argparse.ArgumentParser, bivariate: bool) -> None:
    n = 2 if bivariate else "+"
    p.add_argument("inputs", nargs=n, metavar="CSV", help="input series (canonical CSV)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--lags", type=int, help="fixed lag order")
    group.add_argument(
        "--select-max",
        type=int,
        default=8,
        metavar="P",
        help="select the lag by criteria up to P (default 8)",
    )
    _add_transform_flags(p)


def _add_sign_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--sign-convention",
        choices=["long_run", "impact"],
        default="long_run",
        help="column-sign normalization of the impact matrix",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrsvar",
        description="Bivariate structural VAR with a long-run restriction: "
        "unit roots, lag selection, identification, IRFs, diagnostics, shock correlation.",
    )
    parser.add_argument("--format", choices=["json", "text"], default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load, transform, and re-emit a series")
    p.add_argument("input", metavar="CSV")
    p.add_argument("--output", metavar="OUT")
    _add_transform_flags(p)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("adf", help="unit-root tests and order of integration")
    p.add_argument("inputs", nargs="+", metavar="CSV")
    p.add_argument("--spec", default="constant", help="deterministic spec(s), comma-separated per level")
    p.add_argument("--lag", type=int, default=None, help="fixed ADF lag (default: Schwarz selection)")
    p.add_argument("--max-order", type=int, default=2)
    p.add_argument("--log", action="store_true", help="log-transform before testing")
    p.set_defaults(func=_cmd_adf)

    p = sub.add_parser("fit", help="estimate a VAR and report criteria/stability")
    _add_model_flags(p, bivariate=False)
    p.add_argument("--exclusion-lag", type=int, default=None, help="run the lag-exclusion Wald test")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("diagnose", help="residual diagnostics of the identified model")
    _add_model_flags(p, bivariate=True)
    _add_sign_flag(p)
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("irf", help="structural impulse responses")
    _add_model_flags(p, bivariate=True)
    _add_sign_flag(p)
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--cumulative", action="store_true", help="plot cumulative responses in SVGs")
    p.add_argument("--svg-dir", metavar="DIR", help="also write one SVG panel per variable")
    p.set_defaults(func=_cmd_irf)

    p = sub.add_parser("shocks", help="recover structural shock series")
    _add_model_flags(p, bivariate=True)
    _add_sign_flag(p)
    p.add_argument("--output", metavar="OUT.csv")
    p.set_defaults(func=_cmd_shocks)

    p = sub.add_parser("correlate", help="cross-country shock correlations")
    p.add_argument("panel", nargs="+", metavar="LABEL=SHOCKS.csv")
    p.add_argument(
        "--sub-period",
        action="append",
        default=[],
        metavar="LABEL=YYYY-QN:YYYY-QN",
        help="add a sub-period window (repeatable)",
    )
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("simulate", help="generate synthetic data from a known structural model")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--observations", "-T", type=int, default=300)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--dgp-lags", type=int, choices=[1, 2], default=2)
    p.add_argument("--start", default="2000-Q1", metavar="YYYY-QN")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("run", help="full pipeline from a JSON config")
    p.add_argument("config", metavar="CONFIG.json")
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else _USAGE_EXIT
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _DATA_EXIT
    except (EstimationError, IdentificationError, StationarityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _MODEL_EXIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
