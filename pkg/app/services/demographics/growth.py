"""
Population Growth
Cohort mass grows at rate g; older cohorts become a shrinking share of traders
"""
import logging

import numpy as np
import pandas as pd

from app.core.exceptions import ParameterError
from app.core.validation import require_two_periods
from app.models.schemas.beliefs import DividendHistory
from app.models.schemas.demographics import GrowthParams, GrowthPricing
from app.models.schemas.economy import EconomyParams

logger = logging.getLogger(__name__)


def solve_growth_pricing(params: EconomyParams, growth: GrowthParams) -> GrowthPricing:
    """
    gamma_f = (1+g)/(2+g) is the young share of traders. Loadings solve

        R beta0 = (1+beta0)(gamma_f + (1-gamma_f) omega) + beta1
        R beta1 = (1+beta0)(1-gamma_f)(1-omega)

    and alpha0 = -gamma (1+beta0)^2 sigma^2 (1+g) / ((R - 1/(1+g)) y0 (2+g)).
    """
    require_two_periods(params, "growth pricing")
    g, R, omega = growth.g, params.R, params.omega
    if R <= 1.0 / (1.0 + g):
        raise ParameterError(
            f"R={R} must exceed 1/(1+g)={1.0 / (1.0 + g):.6g}",
            details={"R": R, "g": g},
        )

    young_share = (1.0 + g) / (2.0 + g)
    c0 = young_share + (1.0 - young_share) * omega
    c1 = (1.0 - young_share) * (1.0 - omega)
    system = np.array([[R - c0, -1.0], [-c1, R]])
    beta0, beta1 = np.linalg.solve(system, np.array([c0, c1]))

    alpha0 = (
        -params.gamma * (1.0 + beta0) ** 2 * params.sigma ** 2 * (1.0 + g)
        / ((R - 1.0 / (1.0 + g)) * growth.y0 * (2.0 + g))
    )
    return GrowthPricing(alpha0=float(alpha0), beta0=float(beta0), beta1=float(beta1), g=g)


def growth_price_path(pricing: GrowthPricing, history: DividendHistory) -> pd.DataFrame:
    """Prices p_t for every t with a lagged dividend; time counts from the t=0 cohort."""
    d = history.as_array()
    if len(d) < 2:
        raise ParameterError("need at least two dividends")
    times = np.arange(history.origin_time + 1, history.end_time + 1)
    intercept = pricing.alpha0 * (1.0 + pricing.g) ** (-times.astype(float))
    prices = intercept + pricing.beta0 * d[1:] + pricing.beta1 * d[:-1]
    return pd.DataFrame({"time": times, "dividend": d[1:], "intercept": intercept, "price": prices})
