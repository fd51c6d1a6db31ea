"""
Economy Schemas
Primitives of the overlapping-generations economy and its myopic linear equilibrium
"""
import math
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import expit
from pydantic import BaseModel, ConfigDict, Field, field_validator


class EconomyParams(BaseModel):
    """
    Primitives shared by every solver.
    `lam` is exposed as "lambda" in JSON and on the command line.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    q: int = Field(..., ge=1, description="Trading periods per life")
    R: float = Field(..., gt=1, description="Gross riskless rate")
    gamma: float = Field(1.0, gt=0, description="CARA risk aversion")
    sigma: float = Field(1.0, gt=0, description="Dividend standard deviation (known to agents)")
    theta: float = Field(1.0, description="True dividend mean (benchmark and simulator only)")
    lam: float = Field(0.0, alias="lambda", description="Recency parameter")

    @field_validator("R", "gamma", "sigma", "theta", "lam")
    @classmethod
    def finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("must be finite")
        return v

    @property
    def omega(self) -> float:
        """Weight an age-1 agent puts on the current dividend, 2^λ/(1+2^λ)."""
        return float(expit(self.lam * math.log(2.0)))

    def with_overrides(self, **changes) -> "EconomyParams":
        data = self.model_dump()
        data.update(changes)
        return EconomyParams(**data)


class AvgWeights(BaseModel):
    """Cross-cohort average experience weight on each lag."""
    model_config = ConfigDict(frozen=True)

    w: Tuple[float, ...]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.w, dtype=float)


class PriceCoefficients(BaseModel):
    """
    Affine price rule p_t = alpha + sum_k betas[k] * d_{t-k}.
    """
    model_config = ConfigDict(frozen=True)

    alpha: float
    betas: Tuple[float, ...] = Field(..., min_length=1)

    @field_validator("betas")
    @classmethod
    def finite_betas(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not all(math.isfinite(b) for b in v):
            raise ValueError("betas must be finite")
        return v

    @property
    def beta0(self) -> float:
        return self.betas[0]

    @property
    def n_lags(self) -> int:
        return len(self.betas)

    def as_vector(self) -> np.ndarray:
        """[alpha, beta_0, ..., beta_K]"""
        return np.concatenate(([self.alpha], np.asarray(self.betas, dtype=float)))

    def price(self, recent_dividends: np.ndarray) -> float:
        """Price given d_t, d_{t-1}, ... (most recent first)."""
        d = np.asarray(recent_dividends, dtype=float)[: self.n_lags]
        return float(self.alpha + np.dot(self.betas[: len(d)], d))


class PriceMoments(BaseModel):
    """Unconditional price variance and autocovariances (lag 1 first)."""
    model_config = ConfigDict(frozen=True)

    variance: float = Field(..., ge=0)
    autocov: Tuple[float, ...]
    autocorr: Tuple[float, ...]

    def autocov_at(self, lag: int) -> float:
        if lag < 1:
            raise ValueError("lag must be >= 1")
        return self.autocov[lag - 1] if lag <= len(self.autocov) else 0.0


class DemandProfile(BaseModel):
    """Holdings x_t^n of the cohorts trading at `time`, keyed by birth time."""
    model_config = ConfigDict(frozen=True)

    time: int
    holdings: Dict[int, float]

    @property
    def mean_holding(self) -> float:
        return float(np.mean(list(self.holdings.values())))


class BenchmarkSolution(BaseModel):
    """Known-mean benchmark: constant price, every cohort holds one unit."""
    model_config = ConfigDict(frozen=True)

    price: float
    holding: float


class ExcessPayoffRule(BaseModel):
    """
    s_{t+1} = intercept + next_dividend_loading * d_{t+1} + sum_k lag_loadings[k] * d_{t-k}
    """
    model_config = ConfigDict(frozen=True)

    intercept: float
    next_dividend_loading: float
    lag_loadings: Tuple[float, ...]

    def loading(self, lag: int) -> float:
        """Loading on d_{t-lag}; exactly zero past the price rule's memory."""
        if lag < 0:
            raise ValueError("lag must be >= 0")
        return self.lag_loadings[lag] if lag < len(self.lag_loadings) else 0.0

    def evaluate(self, next_dividend: float, recent_dividends: np.ndarray) -> float:
        d = np.asarray(recent_dividends, dtype=float)[: len(self.lag_loadings)]
        return float(
            self.intercept
            + self.next_dividend_loading * next_dividend
            + np.dot(self.lag_loadings[: len(d)], d)
        )


class DemandSensitivity(BaseModel):
    """dx_t^n / dd_{t-lag}, split into the cohort-specific and the common channel."""
    model_config = ConfigDict(frozen=True)

    lag: int
    age: int
    belief_channel: float
    price_channel: float
    total: float


class PriceSolution(BaseModel):
    """
    Serialized solution document: primitives plus the solved price rule.
    Non-myopic solutions add s2/l01/l11 and the solver report.
    """
    model_config = ConfigDict(populate_by_name=True)

    regime: str = "myopic"
    q: int
    R: float
    gamma: float
    sigma: float
    theta: float
    lam: float = Field(alias="lambda")
    alpha: float
    betas: Tuple[float, ...]
    s2: Optional[float] = None
    l01: Optional[float] = None
    l11: Optional[float] = None
    solver: Optional[Dict[str, float]] = None

    @classmethod
    def from_parts(cls, params: EconomyParams, coeffs: PriceCoefficients, regime: str = "myopic", **extra) -> "PriceSolution":
        return cls(
            regime=regime,
            q=params.q,
            R=params.R,
            gamma=params.gamma,
            sigma=params.sigma,
            theta=params.theta,
            lam=params.lam,
            alpha=coeffs.alpha,
            betas=coeffs.betas,
            **extra,
        )

    def params(self) -> EconomyParams:
        return EconomyParams(q=self.q, R=self.R, gamma=self.gamma, sigma=self.sigma, theta=self.theta, lam=self.lam)

    def coefficients(self) -> PriceCoefficients:
        return PriceCoefficients(alpha=self.alpha, betas=self.betas)
