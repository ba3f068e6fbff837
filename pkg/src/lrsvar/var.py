"""Reduced-form VAR(p) estimation and lag-order tooling.

Estimation is equation-by-equation OLS on a common regressor block
[1, y_{t-1}, ..., y_{t-p}], solved through a QR factorization with an
explicit condition check instead of normal equations. Two residual
covariance estimates are kept: the ML version (divisor T_eff), which feeds
the information criteria and structural identification, and the
degrees-of-freedom-adjusted version used for reporting and Wald tests.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.stats import chi2

from .errors import DataError, EstimationError
from .series import QuarterIndex, QuarterlySeries

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class VarModel:
    """A fitted VAR(p): y_t = intercept + sum_i lag_coeffs[i-1] @ y_{t-i} + e_t."""

    labels: tuple[str, ...]
    start: QuarterIndex  # first observation of the estimation data
    K: int
    p: int
    T_eff: int
    intercept: np.ndarray  # (K,)
    lag_coeffs: tuple[np.ndarray, ...]  # p matrices, each (K, K)
    residuals: np.ndarray  # (T_eff, K)
    regressors: np.ndarray  # (T_eff, 1 + K*p), intercept column first
    sigma_ml: np.ndarray  # divisor T_eff
    sigma_df_adjusted: np.ndarray  # divisor T_eff - (K*p + 1)
    xtx_inv: np.ndarray  # (X'X)^-1 for Wald covariance blocks

    @property
    def resid_start(self) -> QuarterIndex:
        """Quarter of the first residual (the (p+1)-th observation)."""
        return self.start + self.p

    def coefficient_sum(self) -> np.ndarray:
        """A_1 + ... + A_p."""
        return np.sum(self.lag_coeffs, axis=0)


@dataclass(frozen=True)
class LagCriteria:
    """Criteria values for one candidate lag order."""

    lag: int
    lr: float | None  # sequential LR vs lag-1; None when undefined
    lr_reject: bool | None
    fpe: float
    aic: float
    sc: float
    hq: float


@dataclass(frozen=True)
class LagSelectionReport:
    """Per-criterion lag choices over a common estimation sample."""

    max_lag: int
    common_sample: int  # T*
    rows: tuple[LagCriteria, ...]
    chosen: dict[str, int]  # criterion name -> chosen lag
    modal: int
    exclusion_pvalues: dict[int, float]  # joint Wald p per lag, from the max_lag fit


@dataclass(frozen=True)
class LagExclusionResult:
    lag: int
    per_equation_stats: tuple[float, ...]
    per_equation_pvalues: tuple[float, ...]
    joint_stat: float
    joint_pvalue: float
    df_per_equation: int
    df_joint: int


@dataclass(frozen=True)
class StabilityReport:
    moduli: tuple[float, ...]  # companion eigenvalue moduli, descending
    stable: bool


def _stack_design(Y: np.ndarray, p: int, rows_from: int) -> np.ndarray:
    """Rows t = rows_from..T-1 of [1, y_{t-1}, ..., y_{t-p}]."""
    T, K = Y.shape
    n = T - rows_from
    X = np.empty((n, 1 + K * p))
    X[:, 0] = 1.0
    for i in range(1, p + 1):
        X[:, 1 + K * (i - 1) : 1 + K * i] = Y[rows_from - i : T - i]
    return X


def _qr_ols(X: np.ndarray, Y: np.ndarray):
    """QR-based OLS; raises EstimationError when the design is ill-conditioned."""
    Q, R = np.linalg.qr(X)
    sv = np.linalg.svd(R, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > _COND_LIMIT:
        raise EstimationError(
            "singular regressor cross-product (condition estimate "
            f"{'inf' if sv[-1] == 0.0 else f'{sv[0] / sv[-1]:.2e}'})"
        )
    coef = solve_triangular(R, Q.T @ Y)
    rinv = solve_triangular(R, np.eye(R.shape[0]))
    return coef, rinv @ rinv.T


def _aligned_matrix(data: list[QuarterlySeries] | tuple[QuarterlySeries, ...]) -> tuple[np.ndarray, tuple[str, ...], QuarterIndex]:
    if len(data) == 0:
        raise ValueError("need at least one series")
    start = data[0].start
    T = len(data[0])
    for s in data[1:]:
        if s.start != start or len(s) != T:
            raise DataError(
                f"misaligned series: {s.label!r} ({s.start}, n={len(s)}) vs "
                f"{data[0].label!r} ({start}, n={T})"
            )
    Y = np.column_stack([np.asarray(s.values) for s in data])
    return Y, tuple(s.label for s in data), start


def fit_var(data: list[QuarterlySeries] | tuple[QuarterlySeries, ...], p: int) -> VarModel:
    """Estimate a VAR(p) with intercept by OLS.

    All series must share start and length. Requires
    T_eff = T - p >= K*p + 1 + 5.
    """
    if p < 1:
        raise ValueError("lag order must be >= 1")
    Y, labels, start = _aligned_matrix(data)
    T, K = Y.shape
    T_eff = T - p
    n_params = K * p + 1
    if T_eff < n_params + 5:
        raise DataError(
            f"insufficient observations: T_eff={T_eff} but need >= {n_params + 5} "
            f"for K={K}, p={p}"
        )
    X = _stack_design(Y, p, rows_from=p)
    coef, xtx_inv = _qr_ols(X, Y[p:])
    resid = Y[p:] - X @ coef
    sigma_ml = resid.T @ resid / T_eff
    sigma_df = resid.T @ resid / (T_eff - n_params)
    lag_coeffs = tuple(
        coef[1 + K * (i - 1) : 1 + K * i].T.copy() for i in range(1, p + 1)
    )
    return VarModel(
        labels=labels,
        start=start,
        K=K,
        p=p,
        T_eff=T_eff,
        intercept=coef[0].copy(),
        lag_coeffs=lag_coeffs,
        residuals=resid,
        regressors=X,
        sigma_ml=sigma_ml,
        sigma_df_adjusted=sigma_df,
        xtx_inv=xtx_inv,
    )


def _logdet_ml_cov(resid: np.ndarray) -> tuple[float, float]:
    n = resid.shape[0]
    sigma = resid.T @ resid / n
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        raise EstimationError("residual covariance is not positive definite")
    return logdet, float(np.exp(logdet))


def select_lag(
    data: list[QuarterlySeries] | tuple[QuarterlySeries, ...],
    max_lag: int,
) -> LagSelectionReport:
    """Compare lag orders 1..max_lag on the common sample of the largest order.

    For each candidate: AIC, SC, HQ penalize log|Sigma_ml| with k total
    estimated parameters over T* common observations; FPE scales |Sigma_ml|
    by ((T*+q)/(T*-q))^K with q parameters per equation; the sequential LR
    statistic (T*-q)(log|Sigma_{p-1}| - log|Sigma_p|) is referred to
    chi-square(K^2) at 5%. The modal choice is the plurality of the five
    criteria, ties resolved toward the smaller lag.
    """
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    Y, _, _ = _aligned_matrix(data)
    T, K = Y.shape
    T_star = T - max_lag
    if T_star < K * max_lag + 1 + 5:
        raise DataError(
            f"max_lag={max_lag} too large for sample: common sample {T_star} "
            f"< {K * max_lag + 1 + 5}"
        )
    Ydep = Y[max_lag:]

    # lag-0 baseline (intercept only) anchors the LR sequence
    centered = Ydep - Ydep.mean(axis=0)
    logdets = {0: _logdet_ml_cov_from_sigma(centered.T @ centered / T_star)}

    chi2_crit = chi2.ppf(0.95, K * K)
    rows: list[LagCriteria] = []
    crit_values: dict[str, list[float]] = {"fpe": [], "aic": [], "sc": [], "hq": []}
    lr_chosen = 0
    for p in range(1, max_lag + 1):
        X = _stack_design(Y, p, rows_from=max_lag)
        coef, _ = _qr_ols(X, Ydep)
        resid = Ydep - X @ coef
        logdet, det = _logdet_ml_cov(resid)
        logdets[p] = logdet
        q = K * p + 1
        k_total = K * q
        aic = logdet + 2.0 * k_total / T_star
        sc = logdet + k_total * np.log(T_star) / T_star
        hq = logdet + 2.0 * k_total * np.log(np.log(T_star)) / T_star
        fpe = ((T_star + q) / (T_star - q)) ** K * det
        lr = (T_star - q) * (logdets[p - 1] - logdet)
        reject = bool(lr > chi2_crit)
        if reject:
            lr_chosen = p
        rows.append(
            LagCriteria(lag=p, lr=float(lr), lr_reject=reject, fpe=float(fpe), aic=float(aic), sc=float(sc), hq=float(hq))
        )
        crit_values["fpe"].append(fpe)
        crit_values["aic"].append(aic)
        crit_values["sc"].append(sc)
        crit_values["hq"].append(hq)

    chosen = {name: int(np.argmin(vals)) + 1 for name, vals in crit_values.items()}
    chosen["lr"] = lr_chosen

    counts = Counter(chosen.values())
    top = max(counts.values())
    modal = min(lag for lag, c in counts.items() if c == top)

    full_model = fit_var(data, max_lag)
    exclusion = {
        lag: lag_exclusion_test(full_model, lag).joint_pvalue
        for lag in range(1, max_lag + 1)
    }
    return LagSelectionReport(
        max_lag=max_lag,
        common_sample=T_star,
        rows=tuple(rows),
        chosen=chosen,
        modal=modal,
        exclusion_pvalues=exclusion,
    )


def _logdet_ml_cov_from_sigma(sigma: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        raise EstimationError("residual covariance is not positive definite")
    return logdet


def lag_exclusion_test(model: VarModel, lag: int) -> LagExclusionResult:
    """Wald test that all coefficients at the given lag are jointly zero.

    Coefficient covariance uses the df-adjusted residual covariance. The
    joint statistic is chi-square(K^2); per-equation statistics chi-square(K).
    """
    if not 1 <= lag <= model.p:
        raise ValueError(f"lag {lag} out of range 1..{model.p}")
    K = model.K
    cols = slice(1 + K * (lag - 1), 1 + K * lag)
    V = model.xtx_inv[cols, cols]
    A = model.lag_coeffs[lag - 1]  # (K, K), row = equation
    sigma = model.sigma_df_adjusted

    per_stats = []
    per_p = []
    V_inv = np.linalg.inv(V)
    for j in range(K):
        a = A[j]
        w = float(a @ V_inv @ a / sigma[j, j])
        per_stats.append(w)
        per_p.append(float(chi2.sf(w, K)))

    c = A.reshape(-1)  # equation-major vec, matches kron(sigma, V)
    cov = np.kron(sigma, V)
    joint = float(c @ np.linalg.solve(cov, c))
    return LagExclusionResult(
        lag=lag,
        per_equation_stats=tuple(per_stats),
        per_equation_pvalues=tuple(per_p),
        joint_stat=joint,
        joint_pvalue=float(chi2.sf(joint, K * K)),
        df_per_equation=K,
        df_joint=K * K,
    )


def companion_matrix(lag_coeffs: tuple[np.ndarray, ...] | list[np.ndarray]) -> np.ndarray:
    """(K*p, K*p) companion form of the lag coefficient stack."""
    p = len(lag_coeffs)
    K = lag_coeffs[0].shape[0]
    C = np.zeros((K * p, K * p))
    for i, A in enumerate(lag_coeffs):
        C[:K, K * i : K * (i + 1)] = A
    if p > 1:
        C[K:, : K * (p - 1)] = np.eye(K * (p - 1))
    return C


def check_stability(model: VarModel) -> StabilityReport:
    """Companion eigenvalue moduli, descending; stable iff all are below 1."""
    eigs = np.linalg.eigvals(companion_matrix(model.lag_coeffs))
    moduli = tuple(sorted((float(abs(e)) for e in eigs), reverse=True))
    return StabilityReport(moduli=moduli, stable=bool(moduli[0] < 1.0))
