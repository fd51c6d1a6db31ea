"""
Demographic Shocks
One unexpected change in the mass of the cohort born at tau (two trading periods)

The shocked cohort trades at tau (young) and tau+1 (old), so only those two
prices move off the baseline rule. Coefficients are solved backwards: the
tau+1 price is priced off the baseline rule at tau+2, the tau price off the
tau+1 rule.
"""
import logging
from typing import Tuple

import numpy as np
import pandas as pd

from app.core.exceptions import ParameterError
from app.core.validation import require_two_periods
from app.models.schemas.beliefs import DividendHistory
from app.models.schemas.demographics import DemographicShock, ShockPricing
from app.models.schemas.economy import EconomyParams
from app.services.equilibrium.myopic import toy_price_coefficients

logger = logging.getLogger(__name__)


def solve_shock_pricing(params: EconomyParams, shock: DemographicShock) -> ShockPricing:
    """
    Price coefficients at tau and tau+1.

    With D = gamma (1+beta0)^2 sigma^2 and baseline intercept alpha/m:

        a_tau1  = (alpha/m - D/m_tau) / R
        b0_tau1 = (beta1 + (1+beta0)(y + y_tau omega)/m_tau) / R
        b1_tau1 = (1+beta0) y_tau (1-omega) / (R m_tau)

    and the tau coefficients repeat the step with (a_tau1, b0_tau1, b1_tau1)
    as next period's rule and the cohort masses swapped.
    """
    require_two_periods(params, "demographic shock pricing")
    base = toy_price_coefficients(params)
    alpha, beta0, beta1 = base.alpha, base.betas[0], base.betas[1]
    R, omega, sigma2 = params.R, params.omega, params.sigma ** 2
    y, y_tau, m_tau = shock.y, shock.y_tau, shock.m_tau

    alpha_m = alpha / shock.m
    risk = params.gamma * (1.0 + beta0) ** 2 * sigma2

    a_tau1 = (alpha_m - risk / m_tau) / R
    b0_tau1 = (beta1 + (1.0 + beta0) * (y + y_tau * omega) / m_tau) / R
    b1_tau1 = (1.0 + beta0) * y_tau * (1.0 - omega) / (R * m_tau)

    risk_tau1 = params.gamma * (1.0 + b0_tau1) ** 2 * sigma2
    a_tau = (a_tau1 - risk_tau1 / m_tau) / R
    b0_tau = (b1_tau1 + (1.0 + b0_tau1) * (y_tau + y * omega) / m_tau) / R
    b1_tau = (1.0 + b0_tau1) * y * (1.0 - omega) / (R * m_tau)

    logger.debug(f"Shock pricing y={y} y_tau={y_tau}: b0_tau={b0_tau:.6g} b0_tau1={b0_tau1:.6g}")
    return ShockPricing(
        a_tau=a_tau,
        b0_tau=b0_tau,
        b1_tau=b1_tau,
        a_tau1=a_tau1,
        b0_tau1=b0_tau1,
        b1_tau1=b1_tau1,
        alpha_base=alpha_m,
        beta0_base=beta0,
        beta1_base=beta1,
    )


def shock_clearing_residuals(
    params: EconomyParams,
    shock: DemographicShock,
    d_before: float,
    d_tau: float,
    d_after: float,
) -> Tuple[float, float]:
    """
    Excess supply at tau and tau+1 when each cohort holds its myopic demand
    under the shock coefficients; (d_before, d_tau, d_after) are d at tau-1, tau, tau+1.

    Returns:
        (residual at tau, residual at tau+1)
    """
    pricing = solve_shock_pricing(params, shock)
    R, omega, gamma, sigma2 = params.R, params.omega, params.gamma, params.sigma ** 2
    y, y_tau = shock.y, shock.y_tau

    # tau+1: old = cohort tau (mass y_tau), young = cohort tau+1 (mass y); next rule is baseline
    a1, b01, b11 = pricing.at_tau1()
    price_tau1 = a1 + b01 * d_after + b11 * d_tau
    risk = gamma * (1.0 + pricing.beta0_base) ** 2 * sigma2

    def demand_tau1(theta: float) -> float:
        payoff = pricing.alpha_base + (1.0 + pricing.beta0_base) * theta + pricing.beta1_base * d_after
        return (payoff - R * price_tau1) / risk

    old_theta = omega * d_after + (1.0 - omega) * d_tau
    residual_tau1 = y_tau * demand_tau1(old_theta) + y * demand_tau1(d_after) - 1.0

    # tau: old = cohort tau-1 (mass y), young = cohort tau (mass y_tau); next rule is the tau+1 rule
    a0, b00, b10 = pricing.at_tau()
    price_tau = a0 + b00 * d_tau + b10 * d_before
    risk_tau1 = gamma * (1.0 + b01) ** 2 * sigma2

    def demand_tau(theta: float) -> float:
        payoff = a1 + (1.0 + b01) * theta + b11 * d_tau
        return (payoff - R * price_tau) / risk_tau1

    old_theta = omega * d_tau + (1.0 - omega) * d_before
    residual_tau = y * demand_tau(old_theta) + y_tau * demand_tau(d_tau) - 1.0

    return float(residual_tau), float(residual_tau1)


def impulse_dividends(d_bar: float, tau: int, k: int, shock_size: float = 0.0) -> DividendHistory:
    """Constant d_bar on [tau-k-1, tau+1+k] except d_tau = d_bar + shock_size."""
    if k < 0:
        raise ParameterError(f"k must be >= 0, got {k}")
    values = np.full(2 * k + 3, float(d_bar))
    values[k + 1] += shock_size
    return DividendHistory.from_values(values, origin_time=tau - k - 1)


def shock_price_path(
    params: EconomyParams,
    shock: DemographicShock,
    history: DividendHistory,
) -> pd.DataFrame:
    """
    Prices and excess returns with and without the demographic shock.

    Returns:
        DataFrame with columns time, dividend, price, baseline_price,
        excess_return, baseline_excess_return (excess return realized at t+1,
        NaN on the last date)
    """
    pricing = solve_shock_pricing(params, shock)
    tau = shock.tau
    history.require(tau - 1, tau + 1)

    times = np.arange(history.origin_time + 1, history.end_time + 1)
    d = history.as_array()
    current, previous = d[1:], d[:-1]

    a_base, b0_base, b1_base = pricing.baseline()
    baseline = a_base + b0_base * current + b1_base * previous

    intercept = np.full(len(times), a_base)
    load0 = np.full(len(times), b0_base)
    load1 = np.full(len(times), b1_base)
    for date, (a, b0, b1) in ((tau, pricing.at_tau()), (tau + 1, pricing.at_tau1())):
        i = date - times[0]
        intercept[i], load0[i], load1[i] = a, b0, b1
    shocked = intercept + load0 * current + load1 * previous

    def excess(prices: np.ndarray) -> np.ndarray:
        out = np.full(len(prices), np.nan)
        out[:-1] = prices[1:] + current[1:] - params.R * prices[:-1]
        return out

    return pd.DataFrame(
        {
            "time": times,
            "dividend": current,
            "price": shocked,
            "baseline_price": baseline,
            "excess_return": excess(shocked),
            "baseline_excess_return": excess(baseline),
        }
    )
