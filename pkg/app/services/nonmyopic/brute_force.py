"""
Brute-Force Oracles
Quadrature over the next dividend and a one-dimensional search over portfolios

Slow and independent of the adjusted-Gaussian algebra; used to check the
closed forms end to end.
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from app.core.exceptions import ParameterError
from app.models.schemas.economy import EconomyParams, PriceCoefficients
from app.services.beliefs.weights import weight_matrix

logger = logging.getLogger(__name__)

SPAN = 12.0


def _log_gaussian_integral(phi: Callable[[float], float], peak: float, sd: float) -> float:
    """log of the integral of exp(phi) for a concave quadratic phi peaking at `peak`."""
    top = phi(peak)
    mass, _ = quad(
        lambda z: math.exp(phi(z) - top),
        peak - SPAN * sd,
        peak + SPAN * sd,
        points=[peak],
        limit=200,
        epsabs=0.0,
        epsrel=1e-12,
    )
    return top + math.log(mass)


def _search(objective: Callable[[float], float], grid: np.ndarray) -> float:
    """Coarse grid, then golden-section search inside the best bracket."""
    values = np.array([objective(x) for x in grid])
    i = int(np.clip(np.argmin(values), 1, len(grid) - 2))
    result = minimize_scalar(
        objective,
        bracket=(grid[i - 1], grid[i], grid[i + 1]),
        method="golden",
        options={"xtol": 1e-12},
    )
    return float(result.x)


def brute_force_gral_max(
    A: float,
    B: float,
    C: float,
    mu: float,
    sigma2: float,
    e: float,
    f: float,
    a: float,
    grid: Optional[np.ndarray] = None,
) -> Tuple[float, float]:
    """
    Maximize E[-exp(-a x (f + e z) - A - B z - C z^2)] over x numerically.

    Returns:
        (xstar, value)
    """
    if C < 0 or sigma2 <= 0 or a <= 0:
        raise ParameterError("need C >= 0, sigma2 > 0 and a > 0")
    curvature = 2.0 * C + 1.0 / sigma2
    sd = 1.0 / math.sqrt(curvature)

    def log_loss(x: float) -> float:
        def phi(z: float) -> float:
            return (
                -a * x * (f + e * z) - A - B * z - C * z * z
                - 0.5 * math.log(2.0 * math.pi * sigma2) - 0.5 * (z - mu) ** 2 / sigma2
            )

        peak = (mu / sigma2 - B - a * x * e) / curvature
        return _log_gaussian_integral(phi, peak, sd)

    grid = np.linspace(-50.0, 50.0, 401) if grid is None else grid
    xstar = _search(log_loss, grid)
    return xstar, -math.exp(log_loss(xstar))


def brute_force_young_demand(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    d_now: float,
    d_prev: float,
    grid: Optional[np.ndarray] = None,
) -> float:
    """
    Age-0 demand at q=2 from the two-period problem itself.

    The old-age value given wealth W is -exp(-gamma R W - (E_{t+1}[s_{t+2}])^2 / (2 e^2 sigma^2))
    with E_{t+1}[s_{t+2}] = alpha(1-R) + l01 d_{t+1} + l11 d_t. The young agent
    believes d_{t+1} ~ N(d_t, sigma^2); the outer expectation is integrated
    numerically and the portfolio found by search.
    """
    if params.q != 2 or coeffs.n_lags != 2:
        raise ParameterError("brute-force demand is for q=2 with a two-lag price rule")
    alpha, (beta0, beta1) = coeffs.alpha, coeffs.betas
    R, gamma, sigma2, omega = params.R, params.gamma, params.sigma ** 2, params.omega
    e = 1.0 + beta0

    l01 = e * omega + beta1 - R * beta0
    l11 = e * (1.0 - omega) - R * beta1
    c0 = alpha * (1.0 - R) + l11 * d_now
    c1 = l01

    price_now = alpha + beta0 * d_now + beta1 * d_prev
    payoff_const = alpha + beta1 * d_now - R * price_now
    curvature = 1.0 / sigma2 + c1 ** 2 / (e ** 2 * sigma2)
    sd = 1.0 / math.sqrt(curvature)

    def log_loss(x: float) -> float:
        def phi(z: float) -> float:
            excess = payoff_const + e * z
            return (
                -gamma * R * x * excess
                - 0.5 * (c0 + c1 * z) ** 2 / (e ** 2 * sigma2)
                - 0.5 * math.log(2.0 * math.pi * sigma2) - 0.5 * (z - d_now) ** 2 / sigma2
            )

        peak = (d_now / sigma2 - gamma * R * x * e - c0 * c1 / (e ** 2 * sigma2)) / curvature
        return _log_gaussian_integral(phi, peak, sd)

    grid = np.linspace(-100.0, 100.0, 401) if grid is None else grid
    demand = _search(log_loss, grid)
    logger.debug(f"Brute-force young demand at d_t={d_now}, d_t-1={d_prev}: {demand:.8g}")
    return demand


# ============================================================================
# THREE TRADING PERIODS
# ============================================================================

HERMITE_NODES = 20


def _fit_peak(psi: Callable[[np.ndarray], np.ndarray], center: float, step: float) -> Tuple[float, float]:
    """Vertex and curvature of the parabola through psi at center and center +/- step."""
    lo, mid, hi = psi(np.array([center - step, center, center + step]))
    curvature = -(hi - 2.0 * mid + lo) / step ** 2
    if not curvature > 0:
        raise ParameterError(f"integrand is not log-concave near {center:.6g}")
    return center + (hi - lo) / (2.0 * curvature * step), curvature


def _log_expectation(f: Callable[[np.ndarray], np.ndarray], mean: float, var: float) -> float:
    """
    log E[exp(f(z))] for z ~ N(mean, var), f close to a concave quadratic.

    Gauss-Hermite nodes are centred on the peak of the integrand and scaled by
    its curvature, both read off two rounds of three-point fits.
    """
    def psi(z: np.ndarray) -> np.ndarray:
        return f(z) - 0.5 * (z - mean) ** 2 / var

    peak, curvature = _fit_peak(psi, mean, math.sqrt(var))
    peak, curvature = _fit_peak(psi, peak, 1.0 / math.sqrt(curvature))

    u, w = np.polynomial.hermite.hermgauss(HERMITE_NODES)
    scale = math.sqrt(2.0 / curvature)
    values = psi(peak + scale * u) + u ** 2
    top = float(np.max(values))
    return math.log(scale) - 0.5 * math.log(2.0 * math.pi * var) + top + math.log(float(np.dot(w, np.exp(values - top))))


def _argmin_convex(objective: Callable[[float], float]) -> Tuple[float, float]:
    result = minimize_scalar(objective, bracket=(0.0, 1.0), method="brent", options={"xtol": 1e-10})
    return float(result.x), float(result.fun)


def brute_force_three_period_demand(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    recent_dividends: Tuple[float, float, float],
) -> float:
    """
    Age-0 demand at q=3 from nested expectations and portfolio searches.

    The oldest cohort's value is the CARA closed form under its own belief.
    The middle-aged value at each d_{t+1} and the young demand are found by
    numerical integration and scalar search, without the adjusted-Gaussian
    recursion. Wealth enters each value linearly in the exponent, so it is
    set to zero and carried through the risk multipliers gamma R^j.

    Args:
        params: Economy with q=3
        coeffs: Price rule with at most three dividend loadings
        recent_dividends: (d_t, d_{t-1}, d_{t-2})
    """
    if params.q != 3 or coeffs.n_lags > 3:
        raise ParameterError("three-period brute force needs q=3 and at most three price loadings")
    alpha = coeffs.alpha
    beta0, beta1, beta2 = (tuple(coeffs.betas) + (0.0, 0.0))[:3]
    R, gamma, sigma2 = params.R, params.gamma, params.sigma ** 2
    e = 1.0 + beta0
    w = weight_matrix(params.lam, 3)
    d0, dm1, dm2 = (float(d) for d in recent_dividends)

    def price(now, lag1, lag2):
        return alpha + beta0 * now + beta1 * lag1 + beta2 * lag2

    def old_log_value(d2: np.ndarray, d1: float) -> np.ndarray:
        # age 2 at t+2: -exp(-m^2 / (2 e^2 sigma^2)), m its expected excess payoff
        mu = w[2, 0] * d2 + w[2, 1] * d1 + w[2, 2] * d0
        payoff_mean = alpha + beta0 * mu + beta1 * d2 + beta2 * d1 + mu - R * price(d2, d1, d0)
        return -0.5 * payoff_mean ** 2 / (e ** 2 * sigma2)

    def middle_log_value(d1: float) -> float:
        # age 1 at t+1 chooses x1 against d_{t+2} ~ N(mu1, sigma^2)
        mu = w[1, 0] * d1 + w[1, 1] * d0
        p1 = price(d1, d0, dm1)

        def loss(x: float) -> float:
            return _log_expectation(
                lambda d2: -gamma * R * x * (price(d2, d1, d0) + d2 - R * p1) + old_log_value(d2, d1),
                mu,
                sigma2,
            )

        return _argmin_convex(loss)[1]

    p0 = price(d0, dm1, dm2)

    def young_loss(x: float) -> float:
        def integrand(d1: np.ndarray) -> np.ndarray:
            excess = price(d1, d0, dm1) + d1 - R * p0
            return -gamma * R ** 2 * x * excess + np.array([middle_log_value(float(z)) for z in d1])

        return _log_expectation(integrand, d0, sigma2)

    demand = _argmin_convex(young_loss)[0]
    logger.debug(f"Brute-force three-period demand at d={recent_dividends}: {demand:.8g}")
    return demand
