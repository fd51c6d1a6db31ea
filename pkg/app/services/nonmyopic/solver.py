"""
Non-Myopic Price Solvers
Market-clearing price rules when agents maximize final wealth

Both solvers find the dividend loadings by root finding from the myopic
solution and then recover the intercept in closed form: every intercept
condition is linear in alpha once the loadings are fixed.
"""
import logging
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import root

from app.core.circuit_breakers import with_solver_retry
from app.core.config import settings
from app.core.exceptions import ParameterError, SolverConvergenceError
from app.core.validation import require_two_periods
from app.models.schemas.economy import EconomyParams, PriceCoefficients
from app.models.schemas.nonmyopic import GeneralSolution, NonMyopicQ2Solution
from app.services.equilibrium.myopic import solve_myopic_prices
from app.services.nonmyopic.recursion import check_admissible, demand_recursion, run_recursion

logger = logging.getLogger(__name__)

METHODS = ("hybr", "lm")
INFEASIBLE = 1e10


# ============================================================================
# ROOT FINDING
# ============================================================================

@with_solver_retry
def find_root(
    residuals: Callable[[np.ndarray], np.ndarray],
    start: np.ndarray,
    label: str,
    *,
    attempt: int = 0,
) -> Tuple[np.ndarray, int, float, str]:
    """
    One root-finding attempt. Later attempts switch method, shrink the initial
    step bound by `solver_damping` and move the start slightly.

    Returns:
        (root, function evaluations, residual inf-norm, method)
    """
    method = METHODS[attempt % len(METHODS)]
    x0 = np.asarray(start, dtype=float) * (1.0 + 0.05 * attempt)
    factor = max(0.1, 100.0 * settings.solver_damping ** attempt)

    if method == "hybr":
        options = {"xtol": 1e-14, "maxfev": settings.solver_max_iterations, "factor": factor}
    else:
        options = {"xtol": 1e-14, "ftol": 1e-14, "maxiter": settings.solver_max_iterations, "factor": factor}

    solution = root(residuals, x0, method=method, options=options)
    residual = float(np.max(np.abs(residuals(solution.x))))
    evaluations = int(getattr(solution, "nfev", 0))

    if not np.isfinite(residual) or residual > settings.solver_tolerance:
        raise SolverConvergenceError(
            f"{label}: residual {residual:.3e} above tolerance {settings.solver_tolerance:g} ({solution.message})",
            residual=residual,
            iterations=evaluations,
            method=method,
        )

    logger.debug(f"{label}: converged with {method} after {evaluations} evaluations, residual={residual:.3e}")
    return solution.x, evaluations, residual, method


# ============================================================================
# TWO TRADING PERIODS
# ============================================================================

def q2_terms(params: EconomyParams, beta0: float, beta1: float) -> Tuple[float, float, float]:
    """
    l01 = (1+beta0) omega + beta1 - R beta0, l11 = (1+beta0)(1-omega) - R beta1,
    s2 = (1+beta0)^2 sigma^2 / (l01^2 + (1+beta0)^2).

    l01 and l11 are the old cohort's demand loadings on d_t and d_{t-1}
    scaled by gamma (1+beta0)^2 sigma^2; s2 is the young cohort's adjusted variance.
    """
    e = 1.0 + beta0
    omega, R = params.omega, params.R
    l01 = e * omega + beta1 - R * beta0
    l11 = e * (1.0 - omega) - R * beta1
    s2 = e ** 2 * params.sigma ** 2 / (l01 ** 2 + e ** 2)
    return l01, l11, s2


def q2_intercept(params: EconomyParams, beta0: float, beta1: float) -> float:
    """alpha solving the intercept condition for given loadings."""
    e = 1.0 + beta0
    R, sigma2 = params.R, params.sigma ** 2
    l01, _, s2 = q2_terms(params, beta0, beta1)
    return 2.0 * R * params.gamma * e ** 2 * sigma2 / ((1.0 - R) * (R + sigma2 / s2 - l01 / e))


def q2_conditions(params: EconomyParams, alpha: float, beta0: float, beta1: float) -> np.ndarray:
    """Residuals of the intercept, d_t and d_{t-1} market-clearing conditions."""
    e = 1.0 + beta0
    R, gamma, sigma2 = params.R, params.gamma, params.sigma ** 2
    l01, l11, s2 = q2_terms(params, beta0, beta1)
    ratio = sigma2 / s2
    return np.array([
        alpha * (1.0 - R) * (R + ratio - l01 / e) - 2.0 * R * gamma * e ** 2 * sigma2,
        l01 + ratio * (beta1 - R * beta0) / R + (e / R) * (1.0 - l11 * l01 / e ** 2),
        l11 - ratio * beta1,
    ])


def solve_nonmyopic_q2(params: EconomyParams) -> NonMyopicQ2Solution:
    """
    Two-period non-myopic equilibrium.

    Args:
        params: Economy with q=2

    Returns:
        NonMyopicQ2Solution; the young cohort's adjusted variance and the old
        cohort's scaled loadings come with it
    """
    require_two_periods(params, "the two-period non-myopic system")
    check_admissible(params)

    def loading_residuals(x: np.ndarray) -> np.ndarray:
        if not np.all(np.isfinite(x)) or x[0] == -1.0:
            return np.full(2, INFEASIBLE)
        return q2_conditions(params, 0.0, x[0], x[1])[1:]

    myopic = solve_myopic_prices(params)
    (beta0, beta1), evaluations, _, method = find_root(
        loading_residuals, np.asarray(myopic.betas), "nonmyopic q=2"
    )
    beta0, beta1 = float(beta0), float(beta1)

    l01, l11, s2 = q2_terms(params, beta0, beta1)
    if l01 >= 0:
        raise SolverConvergenceError(
            f"converged to the root with l01={l01:.6g} >= 0, which does not clear the market",
            residual=float("nan"),
            iterations=evaluations,
            method=method,
        )

    alpha = q2_intercept(params, beta0, beta1)
    residual = float(np.max(np.abs(q2_conditions(params, alpha, beta0, beta1))))
    logger.info(
        f"Non-myopic q=2 (R={params.R}, lambda={params.lam}): "
        f"alpha={alpha:.6g} beta0={beta0:.6g} beta1={beta1:.6g} residual={residual:.2e}"
    )
    return NonMyopicQ2Solution(
        alpha=alpha,
        beta0=beta0,
        beta1=beta1,
        s2=s2,
        l01=l01,
        l11=l11,
        iterations=evaluations,
        residual=residual,
        method=method,
    )


# ============================================================================
# GENERAL q
# ============================================================================

def _with_alpha(alpha: float, betas: np.ndarray) -> np.ndarray:
    return np.concatenate(([alpha], betas))


def solve_nonmyopic_general(params: EconomyParams, q: Optional[int] = None) -> GeneralSolution:
    """
    Price rule on the last q dividends that clears the market when every
    cohort follows the backward demand recursion.

    Loadings solve sum_age delta_k(age) = 0 for k = 0..q-1; the intercept then
    makes sum_age delta(age) = q. Older dividends carry no loading.
    """
    if q is not None and q != params.q:
        params = params.with_overrides(q=q)
    if params.q < 2:
        raise ParameterError(f"non-myopic trading needs q >= 2, got q={params.q}")
    check_admissible(params)
    q = params.q

    def loading_residuals(betas: np.ndarray) -> np.ndarray:
        if not np.all(np.isfinite(betas)) or betas[0] == -1.0:
            return np.full(q, INFEASIBLE)
        try:
            rows = run_recursion(params, _with_alpha(0.0, betas)).rows
        except ParameterError:
            return np.full(q, INFEASIBLE)
        return rows[:q, 1:].sum(axis=0)

    myopic = solve_myopic_prices(params)
    betas, evaluations, _, method = find_root(loading_residuals, np.asarray(myopic.betas), f"nonmyopic q={q}")

    # intercept column is affine in alpha
    at_zero = run_recursion(params, _with_alpha(0.0, betas)).rows[:q, 0].sum() - q
    at_one = run_recursion(params, _with_alpha(1.0, betas)).rows[:q, 0].sum() - q
    slope = at_one - at_zero
    if slope == 0.0:
        raise SolverConvergenceError(
            "aggregate demand does not respond to the price intercept",
            residual=float(abs(at_zero)),
            iterations=evaluations,
            method=method,
        )
    alpha = float(-at_zero / slope)

    coefficients = PriceCoefficients(alpha=alpha, betas=tuple(float(b) for b in betas))
    table = demand_recursion(params, coefficients)
    residual = float(np.max(np.abs(table.market_clearing_residuals())))

    logger.info(
        f"Non-myopic q={q} (R={params.R}, lambda={params.lam}): "
        f"alpha={alpha:.6g} beta0={coefficients.beta0:.6g} residual={residual:.2e}"
    )
    return GeneralSolution(
        coefficients=coefficients,
        table=table,
        iterations=evaluations,
        residual=residual,
        method=method,
    )
