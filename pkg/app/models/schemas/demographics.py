"""
Demographics Schemas
One-time cohort-size shocks and constant population growth (two trading periods)
"""
from typing import Tuple
from pydantic import BaseModel, ConfigDict, Field


class DemographicShock(BaseModel):
    """Cohort born at `tau` has mass y_tau instead of y."""
    model_config = ConfigDict(frozen=True)

    tau: int = 0
    y: float = Field(0.5, gt=0, description="Baseline cohort mass")
    y_tau: float = Field(..., gt=0, description="Mass of the cohort born at tau")

    @property
    def m(self) -> float:
        """Baseline total mass of traders."""
        return 2.0 * self.y

    @property
    def m_tau(self) -> float:
        """Total mass of traders at tau and tau+1."""
        return self.y + self.y_tau


class ShockPricing(BaseModel):
    """
    Price coefficients (intercept, d_t, d_{t-1}) at tau and tau+1.
    Baseline coefficients are kept for the dates outside the shock window.
    """
    model_config = ConfigDict(frozen=True)

    a_tau: float
    b0_tau: float
    b1_tau: float
    a_tau1: float
    b0_tau1: float
    b1_tau1: float
    alpha_base: float
    beta0_base: float
    beta1_base: float

    def at_tau(self) -> Tuple[float, float, float]:
        return self.a_tau, self.b0_tau, self.b1_tau

    def at_tau1(self) -> Tuple[float, float, float]:
        return self.a_tau1, self.b0_tau1, self.b1_tau1

    def baseline(self) -> Tuple[float, float, float]:
        return self.alpha_base, self.beta0_base, self.beta1_base


class GrowthParams(BaseModel):
    """Cohort mass y_t = y0 * (1+g)^t."""
    model_config = ConfigDict(frozen=True)

    g: float = Field(0.0, gt=-1, description="Population growth rate")
    y0: float = Field(0.5, gt=0, description="Mass of the cohort born at t=0")


class GrowthPricing(BaseModel):
    """p_t = alpha0 * (1+g)^(-t) + beta0 * d_t + beta1 * d_{t-1}"""
    model_config = ConfigDict(frozen=True)

    alpha0: float
    beta0: float
    beta1: float
    g: float

    @property
    def recent_reliance(self) -> float:
        """Share of the dividend loading on the current dividend."""
        return self.beta0 / (self.beta0 + self.beta1)

    def intercept(self, t: int) -> float:
        return self.alpha0 * (1.0 + self.g) ** (-t)
