"""Synthetic data from a fully specified bivariate structural VAR.

The generator is the oracle for the identification pipeline: the true
long-run matrix carries the zero restriction by construction, the true
shocks are unit-variance Gaussian white noise, and everything is
deterministic given the seed (NumPy's PCG64 via default_rng).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .series import QuarterIndex, QuarterlySeries
from .svar import ShockSeries
from .var import companion_matrix


@dataclass(frozen=True)
class StructuralDgp:
    """True bivariate data-generating process y_t = c + sum A_i y_{t-i} + B u_t."""

    lag_coeffs: tuple[np.ndarray, ...]
    impact: np.ndarray  # (2, 2) true B
    intercept: np.ndarray = field(default_factory=lambda: np.zeros(2))
    seed: int = 0

    def __post_init__(self) -> None:
        lags = tuple(np.asarray(A, dtype=float) for A in self.lag_coeffs)
        impact = np.asarray(self.impact, dtype=float)
        intercept = np.asarray(self.intercept, dtype=float)
        if impact.shape != (2, 2) or intercept.shape != (2,):
            raise ValueError("dgp is bivariate: impact must be 2x2, intercept length 2")
        if any(A.shape != (2, 2) for A in lags):
            raise ValueError("every lag matrix must be 2x2")
        if lags:
            moduli = np.abs(np.linalg.eigvals(companion_matrix(lags)))
            if moduli.max() >= 1.0:
                raise ValueError(
                    f"unstable dgp (max companion root modulus {moduli.max():.4f})"
                )
        object.__setattr__(self, "lag_coeffs", lags)
        object.__setattr__(self, "impact", impact)
        object.__setattr__(self, "intercept", intercept)

    @property
    def p(self) -> int:
        return len(self.lag_coeffs)

    def long_run(self) -> np.ndarray:
        """C1 B for this dgp."""
        M = np.eye(2) - np.sum(self.lag_coeffs, axis=0) if self.lag_coeffs else np.eye(2)
        return np.linalg.solve(M, self.impact)

    @classmethod
    def from_long_run(
        cls,
        lag_coeffs: list[np.ndarray] | tuple[np.ndarray, ...],
        long_run: np.ndarray,
        intercept: np.ndarray | None = None,
        seed: int = 0,
    ) -> StructuralDgp:
        """Build a dgp whose true long-run matrix is ``long_run`` exactly.

        ``long_run[0, 0]`` must be 0 so the identification restriction holds
        in the true process; the impact matrix is (I - sum A_i) @ long_run.
        """
        F = np.asarray(long_run, dtype=float)
        if F.shape != (2, 2):
            raise ValueError("long_run must be 2x2")
        if F[0, 0] != 0.0:
            raise ValueError(f"long_run[0, 0] must be exactly 0, got {F[0, 0]!r}")
        lags = tuple(np.asarray(A, dtype=float) for A in lag_coeffs)
        M = np.eye(2) - np.sum(lags, axis=0) if lags else np.eye(2)
        return cls(
            lag_coeffs=lags,
            impact=M @ F,
            intercept=np.zeros(2) if intercept is None else np.asarray(intercept, dtype=float),
            seed=seed,
        )


def simulate(
    dgp: StructuralDgp,
    T: int,
    burn_in: int = 500,
    start: QuarterIndex = QuarterIndex(2000, 1),
    labels: tuple[str, str] = ("y1", "y2"),
) -> tuple[list[QuarterlySeries], ShockSeries]:
    """Draw T observations (after burn-in) plus the true shocks that made them."""
    if T < 100:
        raise ValueError("T must be >= 100")
    if burn_in < 100:
        raise ValueError("burn_in must be >= 100")
    rng = np.random.default_rng(dgp.seed)
    total = burn_in + T
    u = rng.standard_normal((total, 2))
    e = u @ dgp.impact.T
    y = np.zeros((total, 2))
    p = dgp.p
    for t in range(total):
        acc = dgp.intercept + e[t]
        for i in range(1, min(t, p) + 1):
            acc = acc + dgp.lag_coeffs[i - 1] @ y[t - i]
        y[t] = acc
    y = y[burn_in:]
    u = u[burn_in:]
    series = [
        QuarterlySeries(label=labels[j], start=start, values=tuple(float(v) for v in y[:, j]))
        for j in range(2)
    ]
    true_shocks = ShockSeries(
        start=start,
        u_demand=tuple(float(v) for v in u[:, 0]),
        u_supply=tuple(float(v) for v in u[:, 1]),
    )
    return series, true_shocks


def replication_seeds(base_seed: int, n: int) -> tuple[int, ...]:
    """Deterministic per-replication seeds via SeedSequence state expansion."""
    state = np.random.SeedSequence(base_seed).generate_state(n, dtype=np.uint64)
    return tuple(int(s) for s in state)
