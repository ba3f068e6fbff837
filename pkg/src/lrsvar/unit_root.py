"""Augmented Dickey-Fuller testing and order-of-integration search.

The test regresses the first difference on the lagged level, lagged
differences, and the chosen deterministic terms; the statistic is the OLS
t-ratio on the lagged level. P-values and critical values come from the
MacKinnon response surfaces in :mod:`lrsvar.mackinnon`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import mackinnon
from .errors import DataError, EstimationError, StationarityError
from .series import QuarterlySeries, difference


class DeterministicSpec(Enum):
    """Deterministic terms included in the test regression."""

    NONE = "none"
    CONSTANT = "constant"
    TREND_AND_CONSTANT = "trend_and_constant"

    @property
    def mackinnon_kind(self) -> str:
        return {"none": "nc", "constant": "c", "trend_and_constant": "ct"}[self.value]

    @property
    def n_terms(self) -> int:
        return {"none": 0, "constant": 1, "trend_and_constant": 2}[self.value]


@dataclass(frozen=True)
class AdfResult:
    """Outcome of one ADF regression."""

    statistic: float
    lag_used: int
    spec: DeterministicSpec
    p_value: float
    critical_values: tuple[float, float, float]  # 1%, 5%, 10%
    reject_at_5pct: bool
    n_obs: int  # effective observations in the final regression


@dataclass(frozen=True)
class IntegrationReport:
    """Order of integration plus the per-level ADF results that determined it."""

    order: int
    results: tuple[AdfResult, ...]  # index d = test of the d-th difference


def _design(y: np.ndarray, lag: int, spec: DeterministicSpec, trim: int):
    """Regressand/regressors for the ADF regression, trimming ``trim`` initial diffs.

    Column order: deterministics, lagged level, lagged differences 1..lag.
    """
    dy = np.diff(y)
    n = dy.shape[0] - trim
    rows = np.arange(trim, dy.shape[0])
    cols = []
    if spec is not DeterministicSpec.NONE:
        cols.append(np.ones(n))
    if spec is DeterministicSpec.TREND_AND_CONSTANT:
        cols.append(np.arange(1, n + 1, dtype=float))
    cols.append(y[rows])  # y_{t-1} relative to the dependent dy_t
    for i in range(1, lag + 1):
        cols.append(dy[rows - i])
    X = np.column_stack(cols)
    return dy[rows], X


def _ols_tstat_on_level(dep: np.ndarray, X: np.ndarray, level_col: int) -> float:
    n, k = X.shape
    if n <= k:
        raise DataError("series too short for the requested ADF lag")
    coef, _, rank, _ = np.linalg.lstsq(X, dep, rcond=None)
    if rank < k:
        raise EstimationError("singular ADF regressor matrix")
    resid = dep - X @ coef
    s2 = resid @ resid / (n - k)
    xtx_inv = np.linalg.inv(X.T @ X)
    se = np.sqrt(s2 * xtx_inv[level_col, level_col])
    if se == 0.0:
        raise EstimationError("degenerate ADF regression (zero standard error)")
    return float(coef[level_col] / se)


def schwert_max_lag(n_obs: int) -> int:
    """Common rule of thumb for the largest ADF lag: floor(12*(T/100)^(1/4))."""
    return int(np.floor(12.0 * (n_obs / 100.0) ** 0.25))


def adf_test(
    series: QuarterlySeries,
    spec: DeterministicSpec = DeterministicSpec.CONSTANT,
    lag: int | None = None,
) -> AdfResult:
    """Augmented Dickey-Fuller test of the unit-root null.

    With ``lag=None`` the augmentation order is chosen by the Schwarz
    criterion over 0..schwert_max_lag(T), all candidates compared on the
    common sample implied by the largest candidate, then the chosen order is
    re-fit on its full usable sample.
    """
    y = np.asarray(series.values)
    T = y.shape[0]
    ndet = spec.n_terms

    if lag is None:
        max_lag = min(schwert_max_lag(T), max(T // 2 - ndet - 2, 0))
        if T - 1 - max_lag < max(10, max_lag + ndet + 2):
            max_lag = max(T - 1 - max(10, ndet + 2), 0)
        best_lag, best_bic = 0, np.inf
        for cand in range(0, max_lag + 1):
            dep, X = _design(y, cand, spec, trim=max_lag)
            n, k = X.shape
            if n <= k:
                break
            coef, _, rank, _ = np.linalg.lstsq(X, dep, rcond=None)
            if rank < k:
                continue
            resid = dep - X @ coef
            ssr = float(resid @ resid)
            bic = n * np.log(ssr / n) + k * np.log(n)
            if bic < best_bic:
                best_lag, best_bic = cand, bic
        lag = best_lag
    elif lag < 0:
        raise ValueError("lag must be non-negative")

    n_eff = T - 1 - lag
    if n_eff < 10:
        raise DataError(
            f"series {series.label!r} too short for ADF with lag {lag} "
            f"({n_eff} effective observations, need >= 10)"
        )
    dep, X = _design(y, lag, spec, trim=lag)
    stat = _ols_tstat_on_level(dep, X, level_col=ndet)
    kind = spec.mackinnon_kind
    pval = mackinnon.approx_pvalue(stat, kind)
    cvs = mackinnon.critical_values(kind, nobs=dep.shape[0])
    return AdfResult(
        statistic=stat,
        lag_used=lag,
        spec=spec,
        p_value=pval,
        critical_values=cvs,
        reject_at_5pct=stat < cvs[1],
        n_obs=dep.shape[0],
    )


def integration_order(
    series: QuarterlySeries,
    spec_per_level: DeterministicSpec | list[DeterministicSpec] | tuple[DeterministicSpec, ...] = DeterministicSpec.CONSTANT,
    max_order: int = 2,
    lag: int | None = None,
) -> IntegrationReport:
    """Determine I(d) by testing the level, then successive differences.

    Stops at the first rejection at 5%; raises StationarityError when even the
    ``max_order``-th difference fails to reject.
    """
    if isinstance(spec_per_level, DeterministicSpec):
        specs = (spec_per_level,) * (max_order + 1)
    else:
        specs = tuple(spec_per_level)
        if len(specs) < max_order + 1:
            specs = specs + (specs[-1],) * (max_order + 1 - len(specs))

    current = series
    results: list[AdfResult] = []
    for d in range(max_order + 1):
        res = adf_test(current, specs[d], lag=lag)
        results.append(res)
        if res.reject_at_5pct:
            return IntegrationReport(order=d, results=tuple(results))
        if d < max_order:
            current = difference(current, 1)
    raise StationarityError(
        f"series {series.label!r}: no rejection of the unit root up to "
        f"difference order {max_order} (order > {max_order}, inconclusive)"
    )
