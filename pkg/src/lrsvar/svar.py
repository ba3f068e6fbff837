"""Long-run structural identification, impulse responses, and shock recovery.

A fitted bivariate VAR is mapped to two orthogonal unit-variance structural
shocks (demand, supply) by restricting the cumulative long-run response of
the first variable to the first shock to zero. With C1 = (I - sum A_i)^-1
and S = C1 Sigma C1', the long-run matrix F is the lower Cholesky factor of
S with its columns swapped, which places the zero at F[0, 0] exactly while
preserving F F' = S; the impact matrix is B = C1^-1 F, so B B' = Sigma and
the shocks u_t = B^-1 e_t have identity covariance under the ML divisor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IdentificationError
from .series import QuarterIndex
from .var import VarModel, companion_matrix

_STABILITY_MARGIN = 1e-8


@dataclass(frozen=True)
class StructuralModel:
    """Identified impact/long-run matrices for a bivariate VAR."""

    B: np.ndarray  # (2, 2) impact matrix, e_t = B u_t
    F: np.ndarray  # (2, 2) long-run matrix, F = C1 B, F[0, 0] = 0
    C1: np.ndarray  # (2, 2) cumulative reduced-form long-run matrix
    restriction: np.ndarray  # pattern with 0.0 at fixed zeros, nan elsewhere
    sign_convention: str  # "long_run" or "impact"
    flipped_columns: tuple[int, ...]  # columns negated relative to the Cholesky factor


@dataclass(frozen=True)
class IrfResult:
    """Structural responses theta[h, i, j] of variable i to shock j, h = 0..horizon-1."""

    horizon: int
    responses: np.ndarray  # (horizon, K, K)
    cumulative: np.ndarray  # running sum over h


@dataclass(frozen=True)
class ShockSeries:
    """Recovered (or true) structural shock series, quarter-dated."""

    start: QuarterIndex
    u_demand: tuple[float, ...]
    u_supply: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.u_demand) != len(self.u_supply):
            raise ValueError("demand and supply shock series must have equal length")

    def __len__(self) -> int:
        return len(self.u_demand)

    @property
    def end(self) -> QuarterIndex:
        return self.start + (len(self.u_demand) - 1)

    def component(self, kind: str) -> np.ndarray:
        if kind == "demand":
            return np.asarray(self.u_demand)
        if kind == "supply":
            return np.asarray(self.u_supply)
        raise ValueError(f"unknown shock kind {kind!r} (expected 'demand' or 'supply')")


def identify_long_run(model: VarModel, sign_convention: str = "long_run") -> StructuralModel:
    """Identify the structural model via the long-run zero restriction.

    ``sign_convention`` fixes the residual column-sign ambiguity:

    * ``"long_run"`` (default): Cholesky-positive, i.e. the supply shock
      raises long-run output and the demand shock raises the long-run price
      level.
    * ``"impact"``: columns are flipped so both shocks raise output on
      impact (B[0, :] >= 0).
    """
    if model.K != 2:
        raise IdentificationError(
            f"long-run identification requires a bivariate model, got K={model.K}"
        )
    if sign_convention not in ("long_run", "impact"):
        raise ValueError(f"unknown sign convention {sign_convention!r}")

    eigs = np.linalg.eigvals(companion_matrix(model.lag_coeffs))
    max_mod = float(np.max(np.abs(eigs)))
    if max_mod >= 1.0 - _STABILITY_MARGIN:
        raise IdentificationError(
            f"model is not stable (max companion root modulus {max_mod:.6f}); "
            "the long-run matrix is ill-defined"
        )

    M = np.eye(2) - model.coefficient_sum()  # C1^-1
    C1 = np.linalg.inv(M)
    S = C1 @ model.sigma_ml @ C1.T
    S = (S + S.T) / 2.0
    try:
        L = np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise IdentificationError(
            "long-run covariance C1*Sigma*C1' is not positive definite"
        ) from exc

    F = L[:, ::-1].copy()  # column swap puts the exact zero at (0, 0)
    B = M @ F

    flipped: list[int] = []
    if sign_convention == "impact":
        for j in range(2):
            if B[0, j] < 0.0:
                B[:, j] = -B[:, j]
                F[:, j] = -F[:, j]
                flipped.append(j)

    restriction = np.array([[0.0, np.nan], [np.nan, np.nan]])
    return StructuralModel(
        B=B,
        F=F,
        C1=C1,
        restriction=restriction,
        sign_convention=sign_convention,
        flipped_columns=tuple(flipped),
    )


def ma_coefficients(model: VarModel, horizon: int) -> np.ndarray:
    """Reduced-form MA matrices Psi_0..Psi_{horizon-1} via the standard recursion."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    K, p = model.K, model.p
    psi = np.zeros((horizon, K, K))
    psi[0] = np.eye(K)
    for h in range(1, horizon):
        acc = np.zeros((K, K))
        for i in range(1, min(h, p) + 1):
            acc += model.lag_coeffs[i - 1] @ psi[h - i]
        psi[h] = acc
    return psi


def compute_irf(sm: StructuralModel, model: VarModel, horizon: int) -> IrfResult:
    """Structural impulse responses to one-standard-deviation shocks.

    responses[0] equals B exactly; for a stable model the cumulative
    response of variable 0 to shock 0 converges to F[0, 0] = 0.
    """
    psi = ma_coefficients(model, horizon)
    responses = psi @ sm.B
    responses[0] = sm.B  # exact, not I @ B
    return IrfResult(
        horizon=horizon,
        responses=responses,
        cumulative=np.cumsum(responses, axis=0),
    )


def recover_shocks(sm: StructuralModel, model: VarModel) -> ShockSeries:
    """Structural shocks u_t = B^-1 e_t, dated from the (p+1)-th observation."""
    if abs(np.linalg.det(sm.B)) < 1e-300 or np.linalg.cond(sm.B) > 1e12:
        raise IdentificationError("impact matrix is singular; cannot recover shocks")
    U = np.linalg.solve(sm.B, model.residuals.T).T
    return ShockSeries(
        start=model.resid_start,
        u_demand=tuple(float(v) for v in U[:, 0]),
        u_supply=tuple(float(v) for v in U[:, 1]),
    )
