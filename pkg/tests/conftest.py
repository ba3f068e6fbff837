"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from lrsvar import QuarterIndex, QuarterlySeries, StructuralDgp, fit_var, identify_long_run, simulate

START = QuarterIndex(1997, 1)


def make_series(values, start=START, label="s", **kw):
    return QuarterlySeries(label=label, start=start, values=tuple(values), **kw)


def write_series_csv(path, values, start=START):
    lines = ["quarter,value"]
    q = start
    for v in values:
        lines.append(f"{q},{v!r}")
        q = q + 1
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def canonical_dgp(seed=0, p=2):
    """Stable bivariate dgp whose true long-run matrix is [[0, 2], [2, 1]]."""
    lags = (
        np.array([[0.5, 0.1], [0.1, 0.3]]),
        np.array([[0.2, 0.0], [0.0, 0.1]]),
    )[:p]
    return StructuralDgp.from_long_run(
        lag_coeffs=lags,
        long_run=np.array([[0.0, 2.0], [2.0, 1.0]]),
        seed=seed,
    )


@pytest.fixture
def fitted_pair():
    """A fitted, identified bivariate model on simulated data."""
    dgp = canonical_dgp(seed=5)
    series, _ = simulate(dgp, 400)
    model = fit_var(series, 2)
    return model, identify_long_run(model)


def hand_var_model(residuals, sigma=None, lag_coeffs=None, p=None, start=START):
    """Construct a minimal VarModel directly for unit tests of downstream math."""
    from lrsvar import VarModel

    residuals = np.asarray(residuals, dtype=float)
    T, K = residuals.shape
    if lag_coeffs is None:
        lag_coeffs = (np.zeros((K, K)),)
    p = len(lag_coeffs) if p is None else p
    if sigma is None:
        sigma = residuals.T @ residuals / T
    n_params = K * p + 1
    return VarModel(
        labels=tuple(f"y{j + 1}" for j in range(K)),
        start=start,
        K=K,
        p=p,
        T_eff=T,
        intercept=np.zeros(K),
        lag_coeffs=tuple(np.asarray(A, dtype=float) for A in lag_coeffs),
        residuals=residuals,
        regressors=np.column_stack([np.ones(T)] + [np.zeros(T)] * (n_params - 1)),
        sigma_ml=np.asarray(sigma, dtype=float),
        sigma_df_adjusted=np.asarray(sigma, dtype=float) * T / max(T - n_params, 1),
        xtx_inv=np.eye(n_params),
    )
