"""Residual validation battery for fitted VAR models.

Three standard system tests: Jarque-Bera normality on structurally
orthogonalized residuals, a no-cross-terms White heteroskedasticity test
over all residual cross-products, and a one-lag-at-a-time LM test for
residual serial correlation. Auxiliary regressions are solved with a
rank-tolerant least-squares fit so exactly collinear columns degrade to
dropped regressors rather than hard failures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import qr as scipy_qr
from scipy.stats import chi2

from .errors import EstimationError
from .svar import StructuralModel
from .var import VarModel


@dataclass(frozen=True)
class JarqueBeraBlock:
    skewness: tuple[float, ...]
    kurtosis: tuple[float, ...]
    statistics: tuple[float, ...]
    pvalues: tuple[float, ...]
    joint_statistic: float
    joint_df: int
    joint_pvalue: float


@dataclass(frozen=True)
class WhiteBlock:
    statistic: float
    df: int
    pvalue: float
    dropped_columns: tuple[int, ...]  # aux design columns removed as collinear


@dataclass(frozen=True)
class LmEntry:
    lag: int
    statistic: float
    df: int
    pvalue: float


@dataclass(frozen=True)
class DiagnosticsReport:
    jb: JarqueBeraBlock
    white: WhiteBlock
    lm: tuple[LmEntry, ...]

    def warnings(self, alpha: float = 0.05) -> tuple[str, ...]:
        """Human-readable notes for any test rejecting at ``alpha``."""
        notes = []
        if self.jb.joint_pvalue < alpha:
            notes.append(
                f"residual normality rejected (Jarque-Bera joint p={self.jb.joint_pvalue:.4f})"
            )
        if self.white.pvalue < alpha:
            notes.append(f"homoskedasticity rejected (White p={self.white.pvalue:.4f})")
        for entry in self.lm:
            if entry.pvalue < alpha:
                notes.append(
                    f"serial correlation at lag {entry.lag} (LM p={entry.pvalue:.4f})"
                )
        return tuple(notes)


def jarque_bera(sm: StructuralModel, model: VarModel) -> JarqueBeraBlock:
    """Jarque-Bera on structurally orthogonalized residuals v_t = B^-1 e_t.

    Per component: JB = T_eff * (S^2/6 + (K-3)^2/24) with ML moments; the
    joint statistic sums the components and is chi-square with 2K df.
    """
    V = np.linalg.solve(sm.B, model.residuals.T).T
    T = V.shape[0]
    skews, kurts, stats, pvals = [], [], [], []
    for j in range(V.shape[1]):
        c = V[:, j] - V[:, j].mean()
        m2 = float(c @ c) / T
        if m2 <= 0.0:
            raise EstimationError(f"residual component {j} has zero variance")
        m3 = float((c**3).mean())
        m4 = float((c**4).mean())
        s = m3 / m2**1.5
        k = m4 / m2**2
        jb = T * (s * s / 6.0 + (k - 3.0) ** 2 / 24.0)
        skews.append(s)
        kurts.append(k)
        stats.append(jb)
        pvals.append(float(chi2.sf(jb, 2)))
    joint = float(sum(stats))
    df = 2 * V.shape[1]
    return JarqueBeraBlock(
        skewness=tuple(skews),
        kurtosis=tuple(kurts),
        statistics=tuple(stats),
        pvalues=tuple(pvals),
        joint_statistic=joint,
        joint_df=df,
        joint_pvalue=float(chi2.sf(joint, df)),
    )


def _drop_collinear(X: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Keep a maximal independent column subset (pivoted QR), preserving order."""
    _, R, piv = scipy_qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = diag[0] * max(X.shape) * np.finfo(float).eps * 100 if diag[0] > 0 else 0.0
    rank = int(np.sum(diag > tol))
    keep = sorted(piv[:rank])
    dropped = tuple(sorted(set(range(X.shape[1])) - set(keep)))
    return X[:, keep], dropped


def white_test(model: VarModel) -> WhiteBlock:
    """System White test (levels and squares, no cross terms).

    Each residual cross-product e_i*e_j is regressed on a constant, the VAR
    regressors, and their squares; the statistic is T_eff times the sum of
    the R-squareds, chi-square with n_products * (regressors - 1) df.
    """
    E = model.residuals
    T, K = E.shape
    Z = model.regressors[:, 1:]  # lagged levels, intercept handled separately
    aux = np.column_stack([np.ones(T), Z, Z**2])
    aux, dropped = _drop_collinear(aux)
    n_reg = aux.shape[1]
    if n_reg < 2:
        raise EstimationError("White auxiliary regression has no usable regressors")

    r2_sum = 0.0
    n_products = 0
    for i in range(K):
        for j in range(i, K):
            z = E[:, i] * E[:, j]
            sst = float(((z - z.mean()) ** 2).sum())
            if sst <= 0.0:
                raise EstimationError(
                    f"degenerate residual product ({i},{j}): zero variance"
                )
            coef, *_ = np.linalg.lstsq(aux, z, rcond=None)
            ssr = float(((z - aux @ coef) ** 2).sum())
            r2_sum += 1.0 - ssr / sst
            n_products += 1

    stat = T * r2_sum
    df = n_products * (n_reg - 1)
    return WhiteBlock(
        statistic=float(stat),
        df=df,
        pvalue=float(chi2.sf(stat, df)),
        dropped_columns=dropped,
    )


def lm_autocorrelation(model: VarModel, h: int) -> LmEntry:
    """Breusch-Godfrey-style system LM test for serial correlation at lag h.

    Residuals are regressed on the original VAR regressors plus the
    residuals lagged h (zero-filled before the sample start);
    LM = T_eff * (K - trace(Sigma_hat^-1 Sigma_tilde)), chi-square K^2.
    """
    if h < 1:
        raise ValueError("test lag must be >= 1")
    E = model.residuals
    T, K = E.shape
    lagged = np.zeros_like(E)
    if h < T:
        lagged[h:] = E[:-h]
    aux = np.column_stack([model.regressors, lagged])
    if T <= aux.shape[1]:
        raise EstimationError(f"sample too short for LM test at lag {h}")
    coef, *_ = np.linalg.lstsq(aux, E, rcond=None)
    resid = E - aux @ coef
    sigma_hat = model.sigma_ml
    sigma_tilde = resid.T @ resid / T
    stat = T * (K - float(np.trace(np.linalg.solve(sigma_hat, sigma_tilde))))
    df = K * K
    return LmEntry(lag=h, statistic=float(stat), df=df, pvalue=float(chi2.sf(stat, df)))


def run_diagnostics(
    sm: StructuralModel,
    model: VarModel,
    lm_lags: tuple[int, ...] | None = None,
) -> DiagnosticsReport:
    """Full battery; LM defaults to lags 1..4 plus the fitted order."""
    if lm_lags is None:
        lm_lags = tuple(sorted(set(range(1, 5)) | {model.p}))
    return DiagnosticsReport(
        jb=jarque_bera(sm, model),
        white=white_test(model),
        lm=tuple(lm_autocorrelation(model, h) for h in lm_lags),
    )
