"""
Backward Demand Recursion
Affine demands of final-wealth maximizers, solved from the last trading age down

State h_t = [1, d_t, d_{t-1}, ..., d_{t-L}] evolves as h_{t+1} = P h_t + u d_{t+1}
and the excess payoff is s_{t+1} = g.h_t + (1+beta0) d_{t+1}. The continuation
value after age a is -exp(-Gamma W - h'Q h); each step integrates d_{t+1} out
against the agent's belief with the adjusted Gaussian.
"""
import logging
from dataclasses import dataclass

import numpy as np

from app.core.config import settings
from app.core.exceptions import ParameterError
from app.models.schemas.economy import EconomyParams, PriceCoefficients
from app.models.schemas.nonmyopic import DeltaTable
from app.services.beliefs.weights import weight_matrix

logger = logging.getLogger(__name__)


@dataclass
class RecursionResult:
    """Raw arrays behind a DeltaTable."""
    rows: np.ndarray
    s2: np.ndarray
    lags: int


def check_admissible(params: EconomyParams) -> None:
    """Range the non-myopic solvers are run on."""
    if params.q > settings.max_trading_periods:
        raise ParameterError(
            f"q={params.q} exceeds the non-myopic cap of {settings.max_trading_periods}",
            details={"q": params.q, "max_trading_periods": settings.max_trading_periods},
        )
    if params.gamma < settings.min_risk_aversion:
        raise ParameterError(
            f"gamma={params.gamma:g} is below {settings.min_risk_aversion:g}; demands diverge as gamma -> 0",
            details={"gamma": params.gamma},
        )


def shift_matrix(dim: int) -> np.ndarray:
    """P: keeps the constant, moves d_{t-j} to d_{t-j-1}; the d_t slot is filled by u d_{t+1}."""
    P = np.zeros((dim, dim))
    P[0, 0] = 1.0
    for j in range(1, dim - 1):
        P[1 + j, j] = 1.0
    return P


def run_recursion(params: EconomyParams, b: np.ndarray, exact: bool = True) -> RecursionResult:
    """
    Demand rows for ages 0..q-1 plus the zero row of the exiting age.

    Args:
        params: Economy parameters
        b: [alpha, beta_0, ..., beta_K]
        exact: Carry the full quadratic exponent; False keeps only the squared-demand term

    Returns:
        RecursionResult with rows of shape (q+1, L+2)
    """
    q, R, gamma = params.q, params.R, params.gamma
    sigma2 = params.sigma ** 2
    e = 1.0 + b[1]
    if e == 0.0:
        raise ParameterError("beta0 = -1 makes the excess payoff riskless")

    lags = max(q - 1, len(b) - 2)
    dim = lags + 2
    price = np.zeros(dim)
    price[: len(b)] = b

    P = shift_matrix(dim)
    g = P.T @ price - R * price
    weights = weight_matrix(params.lam, q)

    Q = np.zeros((dim, dim))
    rows = np.zeros((q + 1, dim))
    variances = np.zeros(q)
    for age in range(q - 1, -1, -1):
        risk = gamma * R ** (q - 1 - age)
        C = Q[1, 1]
        spread = 2.0 * C * sigma2 + 1.0
        if spread <= 0:
            raise ParameterError(f"continuation value is not integrable at age {age} (C={C:g})")
        B = 2.0 * (Q @ P)[1, :]
        s2 = sigma2 / spread

        belief = np.zeros(dim)
        belief[1: age + 2] = weights[age, : age + 1]
        tilted_mean = s2 * (belief / sigma2 - B)
        payoff_mean = g + e * tilted_mean

        rows[age] = payoff_mean / (risk * e ** 2 * s2)
        variances[age] = s2

        if exact:
            Q = (
                P.T @ Q @ P
                + 0.5 * (np.outer(belief, belief) / sigma2 - np.outer(tilted_mean, tilted_mean) / s2)
                + 0.5 * np.outer(payoff_mean, payoff_mean) / (e ** 2 * s2)
            )
            Q[0, 0] += 0.5 * np.log(spread)
        else:
            Q = 0.5 * np.outer(payoff_mean, payoff_mean) / (e ** 2 * s2)
        Q = 0.5 * (Q + Q.T)

    return RecursionResult(rows=rows, s2=variances, lags=lags)


def demand_recursion(params: EconomyParams, coeffs: PriceCoefficients, exact: bool = True) -> DeltaTable:
    """
    Age-by-lag demand coefficients under a given price rule.

    Ages q-1 and q-2 do not depend on `exact`; from age q-3 down the exact
    recursion also carries the terms that do not scale with the demand itself.
    """
    result = run_recursion(params, coeffs.as_vector(), exact=exact)
    return DeltaTable(
        q=params.q,
        K_lag=result.lags,
        delta=tuple(float(x) for x in result.rows[:, 0]),
        delta_k=tuple(tuple(float(x) for x in row[1:]) for row in result.rows),
        s2=tuple(float(x) for x in result.s2),
        exact=exact,
    )
