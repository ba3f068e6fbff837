"""Full per-country pipeline driven by a declarative JSON config.

Stages per country: transform (deseasonalize/log/difference), unit-root
testing, lag selection, VAR fit, stability gate, long-run identification,
residual diagnostics (soft warnings), impulse responses with SVG panels,
and shock recovery; then cross-country correlation and volatility tables
over the full period and configured sub-periods.

Stability is a hard gate: a country whose model is unstable (or whose
series never reject the unit root within two differencings) is recorded as
failed and skipped past the structural stages while other countries
continue. The consolidated report.json is byte-deterministic for identical
inputs; timestamps live in a report_meta.json sidecar.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .diagnostics import DiagnosticsReport, run_diagnostics
from .errors import DataError, EstimationError, IdentificationError, StationarityError
from .plots import write_irf_panel
from .series import (
    QuarterIndex,
    QuarterlySeries,
    align_series,
    difference,
    dummy_deseasonalize,
    load_csv,
    log_transform,
)
from .shocks import (
    FULL_PERIOD,
    ShockPanel,
    SubPeriod,
    build_correlation_report,
    combined_triangle_table,
    shock_volatility,
    write_shock_csv,
)
from .svar import IrfResult, ShockSeries, StructuralModel, compute_irf, identify_long_run, recover_shocks
from .unit_root import AdfResult, DeterministicSpec, IntegrationReport, adf_test, integration_order
from .var import LagSelectionReport, StabilityReport, VarModel, check_stability, fit_var, select_lag

_MODEL_ERRORS = (StationarityError, EstimationError, IdentificationError)


@dataclass(frozen=True)
class SeriesOptions:
    path: Path
    log: bool = True
    deseasonalize: bool = False
    diff: int | str = "auto"  # integer order or "auto"
    adf_specs: tuple[DeterministicSpec, ...] = (DeterministicSpec.CONSTANT,) * 3

    def __post_init__(self) -> None:
        if isinstance(self.diff, str) and self.diff != "auto":
            raise ValueError(f"diff must be an integer or 'auto', got {self.diff!r}")
        if isinstance(self.diff, int) and self.diff < 0:
            raise ValueError("diff must be non-negative")


@dataclass(frozen=True)
class CountryConfig:
    label: str
    gdp: SeriesOptions
    deflator: SeriesOptions
    lags: int | str = "auto"

    def __post_init__(self) -> None:
        if isinstance(self.lags, str) and self.lags != "auto":
            raise ValueError(f"lags must be an integer or 'auto', got {self.lags!r}")
        if isinstance(self.lags, int) and self.lags < 1:
            raise ValueError("lags must be >= 1")


@dataclass(frozen=True)
class PipelineConfig:
    countries: tuple[CountryConfig, ...]
    output_dir: Path
    horizon: int = 10
    max_lag: int = 8
    sign_convention: str = "long_run"
    sub_periods: tuple[SubPeriod, ...] = ()

    def __post_init__(self) -> None:
        if not self.countries:
            raise ValueError("config needs at least one country")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.max_lag < 1:
            raise ValueError("max_lag must be >= 1")
        labels = [c.label for c in self.countries]
        if len(set(labels)) != len(labels):
            raise ValueError("country labels must be unique")
        paths = [c.gdp.path for c in self.countries] + [c.deflator.path for c in self.countries]
        if len(set(map(str, paths))) != len(paths):
            raise ValueError("every referenced CSV path must be distinct")


def _series_options(raw: dict[str, Any], base: Path, where: str) -> SeriesOptions:
    if "path" not in raw:
        raise DataError(f"config: {where} is missing 'path'")
    specs = raw.get("adf_specs", ["constant", "constant", "constant"])
    try:
        adf_specs = tuple(DeterministicSpec(s) for s in specs)
    except ValueError as exc:
        raise DataError(f"config: {where}: {exc}") from None
    return SeriesOptions(
        path=base / raw["path"],
        log=bool(raw.get("log", True)),
        deseasonalize=bool(raw.get("deseasonalize", False)),
        diff=raw.get("diff", "auto"),
        adf_specs=adf_specs,
    )


def load_config(path: str | Path) -> PipelineConfig:
    """Parse and validate a pipeline config file (JSON; see README for the schema)."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such config file: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict) or "countries" not in raw:
        raise DataError(f"config {path}: expected an object with a 'countries' list")
    base = path.parent
    sub_periods = tuple(
        SubPeriod(
            label=sp["label"],
            start=QuarterIndex.parse(sp["start"]),
            end=QuarterIndex.parse(sp["end"]),
        )
        for sp in raw.get("sub_periods", [])
    )
    countries = []
    for c in raw["countries"]:
        label = c.get("label")
        if not label:
            raise DataError("config: every country needs a 'label'")
        for key in ("gdp", "deflator"):
            if key not in c:
                raise DataError(f"config: country {label!r} is missing {key!r}")
        countries.append(
            CountryConfig(
                label=label,
                gdp=_series_options(c["gdp"], base, f"{label}.gdp"),
                deflator=_series_options(c["deflator"], base, f"{label}.deflator"),
                lags=c.get("lags", "auto"),
            )
        )
    try:
        return PipelineConfig(
            countries=tuple(countries),
            output_dir=base / raw.get("output_dir", "out"),
            horizon=int(raw.get("horizon", 10)),
            max_lag=int(raw.get("max_lag", 8)),
            sign_convention=raw.get("sign_convention", "long_run"),
            sub_periods=sub_periods,
        )
    except ValueError as exc:
        raise DataError(f"config {path}: {exc}") from None


# ---------------------------------------------------------------------------
# serialization helpers (module results -> plain JSON values)

def _arr(a: np.ndarray) -> list:
    return np.asarray(a, dtype=float).tolist()


def _adf_dict(r: AdfResult) -> dict[str, Any]:
    return {
        "statistic": r.statistic,
        "lag_used": r.lag_used,
        "spec": r.spec.value,
        "p_value": r.p_value,
        "critical_values": {"1%": r.critical_values[0], "5%": r.critical_values[1], "10%": r.critical_values[2]},
        "reject_at_5pct": r.reject_at_5pct,
        "n_obs": r.n_obs,
    }


def _integration_dict(rep: IntegrationReport) -> dict[str, Any]:
    return {"order": rep.order, "levels": [_adf_dict(r) for r in rep.results]}


def _lag_selection_dict(rep: LagSelectionReport) -> dict[str, Any]:
    return {
        "max_lag": rep.max_lag,
        "common_sample": rep.common_sample,
        "rows": [
            {"lag": r.lag, "lr": r.lr, "lr_reject": r.lr_reject, "fpe": r.fpe, "aic": r.aic, "sc": r.sc, "hq": r.hq}
            for r in rep.rows
        ],
        "chosen": dict(sorted(rep.chosen.items())),
        "modal": rep.modal,
        "exclusion_pvalues": {str(k): v for k, v in sorted(rep.exclusion_pvalues.items())},
    }


def _var_dict(m: VarModel) -> dict[str, Any]:
    return {
        "labels": list(m.labels),
        "start": str(m.start),
        "p": m.p,
        "t_eff": m.T_eff,
        "intercept": _arr(m.intercept),
        "lag_coeffs": [_arr(A) for A in m.lag_coeffs],
        "sigma_ml": _arr(m.sigma_ml),
        "sigma_df_adjusted": _arr(m.sigma_df_adjusted),
    }


def _stability_dict(s: StabilityReport) -> dict[str, Any]:
    return {"moduli": [float(m) for m in s.moduli], "stable": s.stable}


def _structural_dict(sm: StructuralModel) -> dict[str, Any]:
    return {
        "B": _arr(sm.B),
        "F": _arr(sm.F),
        "C1": _arr(sm.C1),
        "sign_convention": sm.sign_convention,
        "flipped_columns": list(sm.flipped_columns),
    }


def _diagnostics_dict(d: DiagnosticsReport) -> dict[str, Any]:
    return {
        "jarque_bera": {
            "skewness": list(d.jb.skewness),
            "kurtosis": list(d.jb.kurtosis),
            "statistics": list(d.jb.statistics),
            "pvalues": list(d.jb.pvalues),
            "joint_statistic": d.jb.joint_statistic,
            "joint_df": d.jb.joint_df,
            "joint_pvalue": d.jb.joint_pvalue,
        },
        "white": {
            "statistic": d.white.statistic,
            "df": d.white.df,
            "pvalue": d.white.pvalue,
            "dropped_columns": list(d.white.dropped_columns),
        },
        "lm": [{"lag": e.lag, "statistic": e.statistic, "df": e.df, "pvalue": e.pvalue} for e in d.lm],
        "warnings": list(d.warnings()),
    }


def _irf_dict(irf: IrfResult) -> dict[str, Any]:
    return {"horizon": irf.horizon, "responses": _arr(irf.responses), "cumulative": _arr(irf.cumulative)}


def _slug(label: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", label.lower()).strip("_") or "country"


# ---------------------------------------------------------------------------
# pipeline stages

def _prepare_variable(opts: SeriesOptions, label: str) -> tuple[QuarterlySeries, dict[str, Any]]:
    """Load and transform one variable; returns the stationary series and its record."""
    s = load_csv(opts.path, label=label)
    if opts.deseasonalize:
        s = dummy_deseasonalize(s)
    if opts.log:
        s = log_transform(s)
    record: dict[str, Any] = {
        "path": str(opts.path),
        "log": opts.log,
        "deseasonalized": opts.deseasonalize,
    }
    if opts.diff == "auto":
        rep = integration_order(s, opts.adf_specs)
        record["adf"] = _integration_dict(rep)
        d = rep.order
    else:
        d = int(opts.diff)
        probe = difference(s, d) if d > 0 else s
        level = min(d, len(opts.adf_specs) - 1)
        record["adf"] = {
            "order": d,
            "levels": [_adf_dict(adf_test(probe, opts.adf_specs[level]))],
            "note": "fixed differencing order; single confirmatory test shown",
        }
    if d > 0:
        s = difference(s, d)
    record["diff_order"] = d
    record["observations"] = len(s)
    record["start"] = str(s.start)
    return s, record


@dataclass(frozen=True)
class CountryOutcome:
    label: str
    ok: bool
    report: dict[str, Any]
    shocks: ShockSeries | None


def _process_country(cfg: PipelineConfig, country: CountryConfig, outdir: Path) -> CountryOutcome:
    rec: dict[str, Any] = {"status": "ok"}
    try:
        gdp, gdp_rec = _prepare_variable(country.gdp, "gdp")
        infl, infl_rec = _prepare_variable(country.deflator, "inflation")
        rec["transforms"] = {"gdp": gdp_rec, "deflator": infl_rec}
        data = align_series([gdp, infl])

        if country.lags == "auto":
            sel = select_lag(data, cfg.max_lag)
            rec["lag_selection"] = _lag_selection_dict(sel)
            lags = max(sel.modal, 1)
        else:
            lags = int(country.lags)
            rec["lag_selection"] = None
        rec["lags_used"] = lags

        model = fit_var(data, lags)
        rec["var"] = _var_dict(model)
        stability = check_stability(model)
        rec["stability"] = _stability_dict(stability)
        if not stability.stable:
            raise IdentificationError(
                f"model is not stable (max companion root modulus {stability.moduli[0]:.6f})"
            )

        sm = identify_long_run(model, sign_convention=cfg.sign_convention)
        rec["structural"] = _structural_dict(sm)

        diag = run_diagnostics(sm, model)
        rec["diagnostics"] = _diagnostics_dict(diag)

        irf = compute_irf(sm, model, cfg.horizon)
        rec["irf"] = _irf_dict(irf)

        slug = _slug(country.label)
        figures = []
        for var_idx, (name, tag) in enumerate([("GDP", "gdp"), ("inflation", "inflation")]):
            fig_path = outdir / "figures" / f"{slug}_{tag}.svg"
            write_irf_panel(
                irf,
                variable=var_idx,
                path=fig_path,
                var_label=name,
                cumulative=True,
                title=f"{country.label}: cumulative response of {name} to structural shocks",
            )
            figures.append(str(fig_path.relative_to(outdir)))
        rec["figures"] = figures

        shocks = recover_shocks(sm, model)
        shock_path = outdir / "shocks" / f"{slug}.csv"
        write_shock_csv(shocks, shock_path)
        rec["shocks_csv"] = str(shock_path.relative_to(outdir))
        return CountryOutcome(label=country.label, ok=True, report=rec, shocks=shocks)
    except _MODEL_ERRORS as exc:
        rec["status"] = "failed"
        rec["failure"] = {"error_type": type(exc).__name__, "message": str(exc)}
        return CountryOutcome(label=country.label, ok=False, report=rec, shocks=None)


def _correlation_section(panel: ShockPanel) -> dict[str, Any]:
    report = build_correlation_report(panel)
    periods: dict[str, Any] = {}
    for period, mats in report.periods.items():
        periods[period] = {
            "demand": _arr(mats["demand"]),
            "supply": _arr(mats["supply"]),
            "combined_lower_demand_upper_supply": _arr(
                combined_triangle_table(mats["demand"], mats["supply"])
            ),
        }
    return {"labels": list(report.labels), "periods": periods}


def _volatility_section(panel: ShockPanel) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for period in [FULL_PERIOD] + [sp.label for sp in panel.sub_periods]:
        try:
            out[period] = shock_volatility(panel, period)
        except DataError as exc:
            out[period] = {"error": str(exc)}
    return out


@dataclass(frozen=True)
class PipelineResult:
    report: dict[str, Any]
    report_path: Path
    exit_status: int


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Execute all stages for every country and write the consolidated outputs."""
    started = time.time()
    for c in cfg.countries:
        for p in (c.gdp.path, c.deflator.path):
            if not Path(p).is_file():
                raise DataError(f"no such file: {p} (country {c.label!r})")

    outdir = cfg.output_dir
    (outdir / "figures").mkdir(parents=True, exist_ok=True)
    (outdir / "shocks").mkdir(parents=True, exist_ok=True)

    outcomes = [_process_country(cfg, c, outdir) for c in cfg.countries]
    ok = [o for o in outcomes if o.ok]

    report: dict[str, Any] = {
        "config": {
            "horizon": cfg.horizon,
            "max_lag": cfg.max_lag,
            "sign_convention": cfg.sign_convention,
            "sub_periods": [
                {"label": sp.label, "start": str(sp.start), "end": str(sp.end)}
                for sp in cfg.sub_periods
            ],
            "countries": [c.label for c in cfg.countries],
        },
        "countries": {o.label: o.report for o in outcomes},
        "failures": [o.label for o in outcomes if not o.ok],
    }

    if len(ok) >= 2:
        panel = ShockPanel(
            entries={o.label: o.shocks for o in ok},
            sub_periods=cfg.sub_periods,
        )
        report["correlations"] = _correlation_section(panel)
        report["volatility"] = _volatility_section(panel)
    else:
        report["correlations"] = None
        report["volatility"] = None
        report["notes"] = ["fewer than 2 countries succeeded; correlation stage skipped"]

    report_path = outdir / "report.json"
    report_path.write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    meta = {
        "generated_unix_time": time.time(),
        "elapsed_seconds": time.time() - started,
    }
    (outdir / "report_meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return PipelineResult(
        report=report,
        report_path=report_path,
        exit_status=0 if len(ok) == len(outcomes) else 3,
    )
