"""
Non-Myopic Schemas
Adjusted-Gaussian reduction, backward demand tables and the two-period price system
"""
from typing import Dict, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.models.schemas.economy import PriceCoefficients


class QuadraticExponential(BaseModel):
    """Value function -exp(-A - B z - C z^2)."""
    model_config = ConfigDict(frozen=True)

    A: float = 0.0
    B: float = 0.0
    C: float = Field(0.0, ge=0)


class AdjustedGaussianResult(BaseModel):
    """Tilted normal N(m, Sigma2) and its normalizer K (log_K kept for overflow)."""
    model_config = ConfigDict(frozen=True)

    m: float
    Sigma2: float = Field(..., gt=0)
    K: float = Field(..., ge=0)
    log_K: float


class DeltaTable(BaseModel):
    """
    Affine demands by age: x = delta[age] + sum_k delta_k[age][k] * d_{t-k}.
    Row `q` (the exiting age) is all zeros; s2[age] is the adjusted variance
    of next period's dividend used at that age.
    """
    model_config = ConfigDict(frozen=True)

    q: int
    K_lag: int
    delta: Tuple[float, ...]
    delta_k: Tuple[Tuple[float, ...], ...]
    s2: Tuple[float, ...]
    exact: bool = True

    def as_matrix(self) -> np.ndarray:
        """(q+1) x (K_lag+2) array: column 0 intercept, column 1+k loading on d_{t-k}."""
        return np.column_stack((np.asarray(self.delta), np.asarray(self.delta_k)))

    def market_clearing_residuals(self) -> np.ndarray:
        """sum over trading ages of each column, minus q for the intercept."""
        totals = self.as_matrix()[: self.q].sum(axis=0)
        totals[0] -= self.q
        return totals


class NonMyopicQ2Solution(BaseModel):
    """Two-period non-myopic equilibrium and the objects of its price system."""
    model_config = ConfigDict(frozen=True)

    alpha: float
    beta0: float
    beta1: float
    s2: float = Field(..., gt=0)
    l01: float
    l11: float
    iterations: int = 0
    residual: float = 0.0
    method: str = ""

    def to_coefficients(self) -> PriceCoefficients:
        return PriceCoefficients(alpha=self.alpha, betas=(self.beta0, self.beta1))

    def solver_report(self) -> Dict[str, float]:
        return {"iterations": self.iterations, "residual": self.residual}


class SensitivityDecomposition(BaseModel):
    """Young-minus-old demand response to the current dividend, by channel."""
    model_config = ConfigDict(frozen=True)

    beliefs_term: float
    discount_term: float
    dynamic_term: float
    total: float


class DemandDerivatives(BaseModel):
    """Derivatives of the two cohorts' demands with respect to d_t and d_{t-1}."""
    model_config = ConfigDict(frozen=True)

    young_d0: float
    young_d1: float
    old_d0: float
    old_d1: float


class GeneralSolution(BaseModel):
    """Non-myopic price rule for general q with its demand table and solver report."""
    model_config = ConfigDict(frozen=True)

    coefficients: PriceCoefficients
    table: DeltaTable
    iterations: int
    residual: float
    method: str
