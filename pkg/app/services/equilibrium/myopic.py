"""
Myopic Linear Equilibrium
Closed-form price coefficients, price moments and the known-mean benchmark

Every cohort maximizes next-period CARA utility, so prices are affine in the
last q dividends. No iteration is needed; everything here is a closed form.
"""
import logging
from typing import Optional

import numpy as np

from app.core.exceptions import ParameterError
from app.core.validation import require_two_periods
from app.models.schemas.economy import (
    AvgWeights,
    BenchmarkSolution,
    EconomyParams,
    ExcessPayoffRule,
    PriceCoefficients,
    PriceMoments,
)
from app.services.beliefs.weights import weight_matrix

logger = logging.getLogger(__name__)


def average_weights(params: EconomyParams) -> AvgWeights:
    """w_k: experience weight on lag k averaged over the q trading ages."""
    return AvgWeights(w=tuple(weight_matrix(params.lam, params.q).mean(axis=0)))


def solve_myopic_prices(params: EconomyParams) -> PriceCoefficients:
    """
    Price coefficients of the myopic equilibrium.

    beta_k = sum_{j=0}^{q-1-k} w_{k+j} / R^{j+1} / (1 - sum_j w_j / R^{j+1})
    alpha  = -gamma * sigma^2 / ((R - 1) * (1 - sum_j w_j / R^{j+1})^2)
    """
    w = average_weights(params).as_array()
    q, R = params.q, params.R
    discounts = R ** -np.arange(1, q + 1, dtype=float)

    denominator = 1.0 - float(np.dot(w, discounts))
    if denominator <= 0:
        raise ParameterError(
            f"1 - sum w_j/R^(j+1) = {denominator} <= 0; requires R > 1",
            details={"R": R},
        )

    betas = np.array([np.dot(w[k:], discounts[: q - k]) for k in range(q)]) / denominator
    alpha = -params.gamma * params.sigma ** 2 / ((R - 1.0) * denominator ** 2)

    logger.debug(f"Myopic prices q={q} R={R} lambda={params.lam}: alpha={alpha:.6g} beta0={betas[0]:.6g}")
    return PriceCoefficients(alpha=float(alpha), betas=tuple(float(b) for b in betas))


def toy_price_coefficients(params: EconomyParams) -> PriceCoefficients:
    """
    Two-period closed forms with omega = 2^lambda / (1 + 2^lambda):

    beta0 = 2R^2 / ((R-1)(1+2R-omega)) - 1
    beta1 = R(1-omega) / ((R-1)(1+2R-omega))
    alpha = -gamma (1+beta0)^2 sigma^2 / (R-1)
    """
    require_two_periods(params, "the closed-form toy solution")
    R, omega = params.R, params.omega
    scale = (R - 1.0) * (1.0 + 2.0 * R - omega)
    beta0 = 2.0 * R ** 2 / scale - 1.0
    beta1 = R * (1.0 - omega) / scale
    alpha = -params.gamma * (1.0 + beta0) ** 2 * params.sigma ** 2 / (R - 1.0)
    return PriceCoefficients(alpha=alpha, betas=(beta0, beta1))


def recursion_residuals(params: EconomyParams, coeffs: PriceCoefficients) -> np.ndarray:
    """
    R beta_k - (1+beta0) w_k - beta_{k+1}, with beta_q = 0.
    Zero (to rounding) for the myopic solution.
    """
    w = average_weights(params).as_array()
    betas = np.append(np.asarray(coeffs.betas), 0.0)
    return params.R * betas[:-1] - (1.0 + betas[0]) * w - betas[1:]


def price_series(coeffs: PriceCoefficients, dividends: np.ndarray) -> np.ndarray:
    """
    p_t for every t with a full lag window; output[i] is the price at
    index i + n_lags - 1 of `dividends`.
    """
    d = np.asarray(dividends, dtype=float)
    K = coeffs.n_lags
    if len(d) < K:
        raise ParameterError(f"need at least {K} dividends, got {len(d)}")
    # full convolution window = sum_k beta_k d_{t-k}
    return coeffs.alpha + np.convolve(d, np.asarray(coeffs.betas), mode="valid")


def price_moments(coeffs: PriceCoefficients, sigma: float, max_lag: Optional[int] = None) -> PriceMoments:
    """
    Unconditional moments under i.i.d. dividends.

    variance = sigma^2 sum beta_k^2; autocov[j] = sigma^2 sum_k beta_k beta_{k+j},
    zero from lag q on. Reported for lags 1..max_lag (default q).
    """
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    betas = np.asarray(coeffs.betas, dtype=float)
    q = len(betas)
    max_lag = q if max_lag is None else max_lag

    variance = sigma ** 2 * float(np.dot(betas, betas))
    autocov = tuple(
        sigma ** 2 * float(np.dot(betas[: q - j], betas[j:])) if j < q else 0.0
        for j in range(1, max_lag + 1)
    )
    autocorr = tuple(c / variance if variance > 0 else 0.0 for c in autocov)
    return PriceMoments(variance=variance, autocov=autocov, autocorr=autocorr)


def excess_return_coeffs(coeffs: PriceCoefficients, R: float) -> ExcessPayoffRule:
    """
    s_{t+1} = p_{t+1} + d_{t+1} - R p_t written on d_{t+1} and d_t, d_{t-1}, ...

    Loading on d_{t-k} is beta_{k+1} - R beta_k (beta_q = 0); lags beyond q-1 do not enter.
    """
    betas = np.append(np.asarray(coeffs.betas, dtype=float), 0.0)
    lag_loadings = betas[1:] - R * betas[:-1]
    return ExcessPayoffRule(
        intercept=coeffs.alpha * (1.0 - R),
        next_dividend_loading=1.0 + betas[0],
        lag_loadings=tuple(float(x) for x in lag_loadings),
    )


def benchmark_known_mean(params: EconomyParams) -> BenchmarkSolution:
    """Known dividend mean: p = (theta - gamma sigma^2)/(R-1), one unit per cohort."""
    price = (params.theta - params.gamma * params.sigma ** 2) / (params.R - 1.0)
    return BenchmarkSolution(price=price, holding=1.0)
