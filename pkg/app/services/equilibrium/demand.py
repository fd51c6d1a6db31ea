"""
Myopic Demands
Cohort holdings, their sensitivities to past dividends and cross-cohort gaps
"""
import logging

import numpy as np

from app.core.exceptions import ParameterError
from app.core.validation import is_trading, require_trading
from app.models.schemas.beliefs import DividendHistory
from app.models.schemas.economy import (
    DemandProfile,
    DemandSensitivity,
    EconomyParams,
    PriceCoefficients,
)
from app.services.beliefs.learners import ebl_belief
from app.services.beliefs.weights import experience_weights, weight_matrix
from app.services.equilibrium.myopic import excess_return_coeffs

logger = logging.getLogger(__name__)


def cara_static_demand(mu: float, var: float, a: float) -> float:
    """argmax_x E[-exp(-a x z)] for z ~ N(mu, var): mu / (a var)."""
    if var <= 0:
        raise ParameterError(f"variance must be positive, got {var}")
    if a <= 0:
        raise ParameterError(f"risk aversion must be positive, got {a}")
    return mu / (a * var)


def _payoff_scale(params: EconomyParams, coeffs: PriceCoefficients) -> float:
    """gamma (1+beta0)^2 sigma^2, the variance-times-risk-aversion of s_{t+1}."""
    if coeffs.beta0 == -1.0:
        raise ParameterError("beta0 = -1 makes the excess payoff riskless")
    return params.gamma * (1.0 + coeffs.beta0) ** 2 * params.sigma ** 2


def state_width(params: EconomyParams, coeffs: PriceCoefficients) -> int:
    """Number of dividend lags a demand can load on."""
    return max(params.q, coeffs.n_lags)


def payoff_state_vector(params: EconomyParams, coeffs: PriceCoefficients) -> np.ndarray:
    """
    E[s_{t+1}] minus its belief part, as coefficients on [1, d_t, ..., d_{t-L+1}].
    """
    rule = excess_return_coeffs(coeffs, params.R)
    width = state_width(params, coeffs)
    vector = np.zeros(width + 1)
    vector[0] = rule.intercept
    vector[1: 1 + len(rule.lag_loadings)] = rule.lag_loadings[:width]
    return vector


def demand_table(params: EconomyParams, coeffs: PriceCoefficients) -> np.ndarray:
    """
    Affine myopic demands: row = age (0..q-1), column 0 = intercept,
    column 1+k = loading on d_{t-k}.
    """
    scale = _payoff_scale(params, coeffs)
    width = state_width(params, coeffs)
    beliefs = np.zeros((params.q, width + 1))
    beliefs[:, 1: params.q + 1] = weight_matrix(params.lam, params.q)
    table = (payoff_state_vector(params, coeffs)[None, :] + (1.0 + coeffs.beta0) * beliefs) / scale
    return table


def recent_state(history: DividendHistory, t: int, width: int) -> np.ndarray:
    """[1, d_t, d_{t-1}, ..., d_{t-width+1}]"""
    return np.concatenate(([1.0], history.recent(t, width)))


def expected_excess_payoff(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    history: DividendHistory,
    birth_time: int,
    now: int,
) -> float:
    """
    E_t^n[s_{t+1}] = alpha(1-R) + (1+beta0) theta_t^n - R beta0 d_t
                     + sum_{k>=1} beta_k (d_{t+1-k} - R d_{t-k})
    """
    theta = ebl_belief(history, birth_time, now, params.lam, params.sigma ** 2).subjective_mean
    betas = np.asarray(coeffs.betas, dtype=float)
    K = len(betas)
    recent = history.recent(now, K)
    payoff = coeffs.alpha * (1.0 - params.R) + (1.0 + betas[0]) * theta - params.R * betas[0] * recent[0]
    for k in range(1, K):
        payoff += betas[k] * (recent[k - 1] - params.R * recent[k])
    return float(payoff)


def myopic_demand(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    history: DividendHistory,
    birth_time: int,
    now: int,
) -> float:
    """
    x_t^n = E_t^n[s_{t+1}] / (gamma (1+beta0)^2 sigma^2); zero outside the trading window.
    """
    scale = _payoff_scale(params, coeffs)
    if not is_trading(params, birth_time, now):
        return 0.0
    return expected_excess_payoff(params, coeffs, history, birth_time, now) / scale


def cohort_demands(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    history: DividendHistory,
    t: int,
) -> DemandProfile:
    """Holdings of the q cohorts trading at t."""
    width = state_width(params, coeffs)
    positions = demand_table(params, coeffs) @ recent_state(history, t, width)
    return DemandProfile(
        time=t,
        holdings={t - age: float(positions[age]) for age in range(params.q)},
    )


def demand_sensitivity(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    birth_time: int,
    now: int,
    lag: int,
) -> DemandSensitivity:
    """
    dx_t^n / dd_{t-lag}: the belief channel (1+beta0) w(lag, age) / D is cohort
    specific; the price channel (beta_{lag+1} - R beta_lag) / D is shared.
    """
    age = require_trading(params, birth_time, now)
    if lag < 0 or lag > params.q - 1:
        raise ParameterError(f"lag must be in [0, {params.q - 1}], got {lag}")

    scale = _payoff_scale(params, coeffs)
    weights = experience_weights(params.lam, age)
    belief_weight = weights[lag] if lag <= age else 0.0

    belief_channel = (1.0 + coeffs.beta0) * belief_weight / scale
    price_channel = excess_return_coeffs(coeffs, params.R).loading(lag) / scale
    return DemandSensitivity(
        lag=lag,
        age=age,
        belief_channel=float(belief_channel),
        price_channel=float(price_channel),
        total=float(belief_channel + price_channel),
    )


def holding_gap(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    history: DividendHistory,
    n: int,
    k: int,
    t: int,
) -> float:
    """
    xi(n, k, t) = (theta_t^n - theta_t^{n+k}) / (gamma (1+beta0) sigma^2):
    how much more cohort n holds than the cohort born k periods later.
    """
    for birth in (n, n + k):
        require_trading(params, birth, t)
    sigma2 = params.sigma ** 2
    older = ebl_belief(history, n, t, params.lam, sigma2).subjective_mean
    younger = ebl_belief(history, n + k, t, params.lam, sigma2).subjective_mean
    return (older - younger) / (params.gamma * (1.0 + coeffs.beta0) * sigma2)
