"""MacKinnon response-surface approximations for Dickey-Fuller tau statistics.

P-values follow MacKinnon (1994), "Approximate Asymptotic Distribution
Functions for Unit-Root and Cointegration Tests", JBES 12(2): the p-value is
Phi(poly(tau)) with separate polynomial fits for the lower and upper range of
the statistic. Finite-sample critical values follow MacKinnon (2010),
"Critical Values for Cointegration Tests", Queen's Economics Department WP
1227: cv(T) = b_inf + b1/T + b2/T^2 + b3/T^3. Only the single-series (N=1)
coefficient sets are shipped; keys are 'nc' (no deterministics), 'c'
(constant), 'ct' (constant and trend).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import norm

# MacKinnon (1994): validity range of the p-value surface per spec kind.
# Outside [tau_min, tau_max] the p-value saturates at 0 or 1; the small-p
# polynomial applies below tau_star, the large-p polynomial above.
_TAU_MIN = {"nc": -19.04, "c": -18.83, "ct": -16.18}
_TAU_MAX = {"nc": math.inf, "c": 2.74, "ct": 0.70}
_TAU_STAR = {"nc": -1.04, "c": -1.61, "ct": -2.89}

# Polynomial coefficients (ascending degree) for Phi^-1(p) as a function of tau.
_SMALL_P = {
    "nc": (0.6344, 1.2378, 0.032496),
    "c": (2.1659, 1.4412, 0.038269),
    "ct": (3.2512, 1.6047, 0.049588),
}
_LARGE_P = {
    "nc": (0.4797, 0.93557, -0.06999, 0.033066),
    "c": (1.7339, 0.93202, -0.12745, -0.010368),
    "ct": (2.5261, 0.61654, -0.37956, -0.060285),
}

# MacKinnon (2010) response surfaces, rows ordered (1%, 5%, 10%),
# columns (b_inf, b1, b2, b3). The 'nc' set is the 1996-vintage surface.
_CRIT_2010 = {
    "nc": (
        (-2.56574, -2.2358, -3.627, 0.0),
        (-1.94100, -0.2686, -3.365, 31.223),
        (-1.61682, 0.2656, -2.714, 25.364),
    ),
    "c": (
        (-3.43035, -6.5393, -16.786, -79.433),
        (-2.86154, -2.8903, -4.234, -40.040),
        (-2.56677, -1.5384, -2.809, 0.0),
    ),
    "ct": (
        (-3.95877, -9.0531, -28.428, -134.155),
        (-3.41049, -4.3904, -9.036, -45.374),
        (-3.12705, -2.5856, -3.925, -22.380),
    ),
}

VALID_KINDS = ("nc", "c", "ct")


def _check_kind(kind: str) -> None:
    if kind not in VALID_KINDS:
        raise ValueError(f"unknown deterministic kind {kind!r}; expected one of {VALID_KINDS}")


def approx_pvalue(stat: float, kind: str) -> float:
    """Approximate p-value of a Dickey-Fuller tau statistic."""
    _check_kind(kind)
    if stat > _TAU_MAX[kind]:
        return 1.0
    if stat < _TAU_MIN[kind]:
        return 0.0
    coefs = _SMALL_P[kind] if stat <= _TAU_STAR[kind] else _LARGE_P[kind]
    z = sum(c * stat**i for i, c in enumerate(coefs))
    return float(norm.cdf(z))


def critical_values(kind: str, nobs: float = math.inf) -> tuple[float, float, float]:
    """Finite-sample (or asymptotic, for nobs=inf) 1%/5%/10% critical values."""
    _check_kind(kind)
    out = []
    for b in _CRIT_2010[kind]:
        if math.isinf(nobs):
            out.append(b[0])
        else:
            t = 1.0 / nobs
            out.append(b[0] + b[1] * t + b[2] * t**2 + b[3] * t**3)
    return (out[0], out[1], out[2])
