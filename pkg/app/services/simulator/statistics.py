"""
Path Statistics
Sample price moments and predictability regressions on simulated paths
"""
import logging
from typing import Literal

import numpy as np
import statsmodels.api as sm

from app.core.exceptions import DegenerateInputError, HistoryCoverageError, ParameterError
from app.models.schemas.simulation import EstimatedMoments, RegressionResult, SimPath

logger = logging.getLogger(__name__)

DEGENERATE_STD = 1e-12


def _mean_with_hac_se(series: np.ndarray, maxlags: int) -> tuple:
    """Sample mean of `series` and its HAC standard error (uniform kernel)."""
    fit = sm.OLS(series, np.ones(len(series))).fit(
        cov_type="HAC", cov_kwds={"maxlags": maxlags, "kernel": "uniform"}
    )
    return float(fit.params[0]), float(fit.bse[0])


def estimate_moments(path: SimPath, max_lag: int) -> EstimatedMoments:
    """
    Price variance and autocovariances at lags 1..max_lag.

    Each moment is the mean of a product series; the price is a moving average
    of q dividends, so the product at lag j is dependent up to q+j periods and
    that is the HAC window.
    """
    if max_lag < 1:
        raise ParameterError(f"max_lag must be >= 1, got {max_lag}")
    T = path.T
    if T < 10 * max_lag:
        raise HistoryCoverageError(
            f"path of {T} periods is too short for {max_lag} lags (need {10 * max_lag})",
            details={"T": T, "max_lag": max_lag},
        )
    q = path.params.q
    x = path.prices - path.prices.mean()

    variance, variance_se = _mean_with_hac_se(x * x, q)
    autocov, autocov_se = [], []
    for j in range(1, max_lag + 1):
        value, se = _mean_with_hac_se(x[:-j] * x[j:], q + j)
        autocov.append(value)
        autocov_se.append(se)

    autocorr = tuple(c / variance if variance > 0 else 0.0 for c in autocov)
    return EstimatedMoments(
        variance=variance,
        variance_se=variance_se,
        autocov=tuple(autocov),
        autocov_se=tuple(autocov_se),
        autocorr=autocorr,
        n_obs=T,
    )


def predictability_regression(
    path: SimPath,
    lags: int,
    regressand: Literal["return", "payoff"] = "return",
) -> RegressionResult:
    """
    OLS of next period's excess return on a constant and d_t, ..., d_{t-lags+1}.

    Args:
        path: Simulated path
        lags: Number of dividend regressors (>= q)
        regressand: "return" for (p_{t+1} + d_{t+1})/p_t - R, "payoff" for p_{t+1} + d_{t+1} - R p_t

    Returns:
        RegressionResult with classical standard errors
    """
    q = path.params.q
    if lags < q:
        raise ParameterError(f"lags must be >= q={q}, got {lags}")
    if regressand not in ("return", "payoff"):
        raise ParameterError(f"regressand must be 'return' or 'payoff', got {regressand!r}")

    regressors = path.lagged_dividends(lags)
    if np.any(regressors.std(axis=0) < DEGENERATE_STD):
        raise DegenerateInputError(
            "dividend regressors are constant; the regression is not identified",
            details={"lags": lags},
        )
    y = path.excess_rates if regressand == "return" else path.excess_returns

    fit = sm.OLS(y, sm.add_constant(regressors, has_constant="add")).fit(method="qr")
    names = ("const",) + tuple("d_t" if k == 0 else f"d_t-{k}" for k in range(lags))

    logger.debug(f"Predictability regression: n={len(y)} lags={lags} R2={fit.rsquared:.4f}")
    return RegressionResult(
        names=names,
        coefficients=tuple(float(b) for b in fit.params),
        standard_errors=tuple(float(s) for s in fit.bse),
        t_values=tuple(float(t) for t in fit.tvalues),
        n_obs=int(fit.nobs),
        r_squared=float(fit.rsquared),
    )
