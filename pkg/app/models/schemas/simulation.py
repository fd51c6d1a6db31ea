"""
Simulation Schemas
Monte Carlo configuration, simulated paths and estimation reports
"""
from typing import List, Literal, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.exceptions import HistoryCoverageError
from app.models.schemas.economy import EconomyParams, PriceCoefficients, PriceMoments

Regime = Literal["myopic", "nonmyopic_q2"]


class SimConfig(BaseModel):
    """One simulated path."""
    model_config = ConfigDict(frozen=True)

    seed: int = 42
    T: int = Field(..., ge=1, description="Periods reported after burn-in")
    burn_in: int = Field(..., ge=1)
    params: EconomyParams
    regime: Regime = "myopic"
    path_index: int = Field(0, ge=0, description="Substream key; paths with different indices are independent")
    dividend_std: Optional[float] = Field(None, ge=0, description="Shock scale; defaults to params.sigma")
    include_entry_exit: bool = Field(False, description="Trade volume convention for the tv column")

    @model_validator(mode="after")
    def burn_in_covers_memory(self):
        if self.burn_in < self.params.q:
            raise ValueError(f"burn_in={self.burn_in} must be >= q={self.params.q}")
        if self.regime == "nonmyopic_q2" and self.params.q != 2:
            raise ValueError("nonmyopic_q2 regime requires q=2")
        return self

    @property
    def shock_std(self) -> float:
        return self.params.sigma if self.dividend_std is None else self.dividend_std


class SimPath(BaseModel):
    """
    Aligned series over the reported window. excess_returns[i] (the payoff
    p_{t+1} + d_{t+1} - R p_t) and excess_rates[i] ((p_{t+1} + d_{t+1})/p_t - R) are realized
    between times[i] and times[i] + 1. holdings[i, a] is the position of the
    cohort aged a at times[i].
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: EconomyParams
    coefficients: PriceCoefficients
    regime: Regime
    times: np.ndarray
    dividends: np.ndarray
    prices: np.ndarray
    excess_returns: np.ndarray
    excess_rates: np.ndarray
    tv: np.ndarray
    holdings: np.ndarray
    full_dividends: np.ndarray
    first_time: int
    path_index: int = 0

    @property
    def T(self) -> int:
        return len(self.times)

    def lagged_dividends(self, lags: int) -> np.ndarray:
        """(T x lags) matrix with column k holding d_{t-k} for each reported t."""
        offset = self.times - self.first_time
        if offset[0] - (lags - 1) < 0:
            raise HistoryCoverageError(
                f"{lags} dividend lags need more burn-in than the {offset[0]} periods simulated",
                details={"lags": lags, "burn_in": int(offset[0])},
            )
        return np.column_stack([self.full_dividends[offset - k] for k in range(lags)])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            {
                "time": self.times,
                "dividend": self.dividends,
                "price": self.prices,
                "excess_return": self.excess_returns,
                "tv": self.tv,
            }
        )
        for age in range(self.holdings.shape[1]):
            frame[f"holding_age_{age}"] = self.holdings[:, age]
        return frame


class RegressionResult(BaseModel):
    """OLS estimates with classical standard errors."""
    model_config = ConfigDict(frozen=True)

    names: Tuple[str, ...]
    coefficients: Tuple[float, ...]
    standard_errors: Tuple[float, ...]
    t_values: Tuple[float, ...]
    n_obs: int
    r_squared: float

    @model_validator(mode="after")
    def lengths_agree(self):
        if not (len(self.names) == len(self.coefficients) == len(self.standard_errors) == len(self.t_values)):
            raise ValueError("coefficient, standard error and name lengths differ")
        return self

    def significant(self, threshold: float = 3.0) -> List[str]:
        return [n for n, t in zip(self.names, self.t_values) if abs(t) > threshold]


class EstimatedMoments(BaseModel):
    """Sample price variance and autocovariances with HAC standard errors."""
    model_config = ConfigDict(frozen=True)

    variance: float
    variance_se: float
    autocov: Tuple[float, ...]
    autocov_se: Tuple[float, ...]
    autocorr: Tuple[float, ...]
    n_obs: int

    def as_price_moments(self) -> PriceMoments:
        return PriceMoments(variance=self.variance, autocov=self.autocov, autocorr=self.autocorr)
