"""
Demand Sensitivity (two trading periods)
How the young and old cohorts' positions respond to dividends, by channel
"""
import logging

from app.models.schemas.economy import EconomyParams
from app.models.schemas.nonmyopic import DemandDerivatives, NonMyopicQ2Solution, SensitivityDecomposition

logger = logging.getLogger(__name__)


def demand_derivatives(solution: NonMyopicQ2Solution, params: EconomyParams) -> DemandDerivatives:
    """
    Loadings of both cohorts' demands on d_t and d_{t-1}.

    Young: [beta1 - R beta0 + e (s2/sigma^2)(1 - l11 l01/e^2)] / (gamma R e^2 s2) and
    -beta1 / (gamma e^2 s2); old: l01 / G and l11 / G with G = gamma e^2 sigma^2.
    """
    e = 1.0 + solution.beta0
    R, gamma, sigma2 = params.R, params.gamma, params.sigma ** 2
    s2, l01, l11 = solution.s2, solution.l01, solution.l11
    scale = gamma * e ** 2 * sigma2

    young_d0 = (
        solution.beta1 - R * solution.beta0 + e * (s2 / sigma2) * (1.0 - l11 * l01 / e ** 2)
    ) / (gamma * R * e ** 2 * s2)
    young_d1 = -solution.beta1 / (gamma * e ** 2 * s2)
    return DemandDerivatives(
        young_d0=young_d0,
        young_d1=young_d1,
        old_d0=l01 / scale,
        old_d1=l11 / scale,
    )


def decompose_sensitivity(solution: NonMyopicQ2Solution, params: EconomyParams) -> SensitivityDecomposition:
    """
    d(x_young - x_old)/d d_t split into

      beliefs   e (1-omega) / G                      different weights on d_t
      discount  -(e + beta1 - R beta0)(R-1) / (R G)  longer horizon of the young
      dynamic   remainder from the young cohort hedging next period's demand
    """
    e = 1.0 + solution.beta0
    R, omega = params.R, params.omega
    G = params.gamma * e ** 2 * params.sigma ** 2
    beta0, beta1, s2, l01, l11 = solution.beta0, solution.beta1, solution.s2, solution.l01, solution.l11
    sigma2 = params.sigma ** 2

    beliefs_term = e * (1.0 - omega) / G
    discount_term = -(e + beta1 - R * beta0) * (R - 1.0) / (R * G)
    dynamic_term = (beta1 - R * beta0) * (sigma2 / s2 - 1.0) / (R * G) - l11 * l01 / (e * R * G)

    derivatives = demand_derivatives(solution, params)
    total = derivatives.young_d0 - derivatives.old_d0

    logger.debug(
        f"Sensitivity: beliefs={beliefs_term:.6g} discount={discount_term:.6g} "
        f"dynamic={dynamic_term:.6g} total={total:.6g}"
    )
    return SensitivityDecomposition(
        beliefs_term=beliefs_term,
        discount_term=discount_term,
        dynamic_term=dynamic_term,
        total=total,
    )
