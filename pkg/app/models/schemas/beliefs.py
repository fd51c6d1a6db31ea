"""
Belief Schemas
Experience weights, dividend histories and learner specifications
"""
import math
from typing import Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.exceptions import HistoryCoverageError


class WeightVector(BaseModel):
    """Weights an agent of `age` puts on the dividend `k` periods back."""
    model_config = ConfigDict(frozen=True)

    age: int = Field(..., ge=0)
    lam: float
    weights: Tuple[float, ...]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


class DividendHistory(BaseModel):
    """
    Contiguous dividend realizations; values[0] is observed at origin_time.
    """
    model_config = ConfigDict(frozen=True)

    origin_time: int = 0
    values: Tuple[float, ...] = Field(..., min_length=1)

    @field_validator("values")
    @classmethod
    def finite_values(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not all(math.isfinite(x) for x in v):
            raise ValueError("dividends must be finite")
        return v

    @classmethod
    def from_values(cls, values: Sequence[float], origin_time: int = 0) -> "DividendHistory":
        return cls(origin_time=origin_time, values=tuple(float(x) for x in values))

    @property
    def end_time(self) -> int:
        return self.origin_time + len(self.values) - 1

    def covers(self, start: int, end: int) -> bool:
        return start >= self.origin_time and end <= self.end_time

    def require(self, start: int, end: int) -> None:
        if not self.covers(start, end):
            raise HistoryCoverageError(
                f"history [{self.origin_time}, {self.end_time}] does not cover [{start}, {end}]",
                details={"origin_time": self.origin_time, "end_time": self.end_time, "start": start, "end": end},
            )

    def at(self, t: int) -> float:
        self.require(t, t)
        return self.values[t - self.origin_time]

    def window(self, start: int, end: int) -> np.ndarray:
        """Dividends from start to end inclusive, oldest first."""
        self.require(start, end)
        return np.asarray(self.values[start - self.origin_time: end - self.origin_time + 1], dtype=float)

    def recent(self, t: int, n: int) -> np.ndarray:
        """d_t, d_{t-1}, ..., d_{t-n+1} (most recent first)."""
        return self.window(t - n + 1, t)[::-1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def shifted(self, constant: float) -> "DividendHistory":
        return DividendHistory(origin_time=self.origin_time, values=tuple(x + constant for x in self.values))


class LearnerSpec(BaseModel):
    """
    How an agent forms beliefs.
    EBL needs `lam`; FBL and BLE need a prior mean and, unless `prior_var`
    is None (exact no-prior mode), a positive prior variance.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["EBL", "FBL", "BLE"]
    dividend_var: float = Field(..., gt=0, description="sigma^2, known to agents")
    lam: Optional[float] = None
    prior_mean: float = 0.0
    prior_var: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def check_kind(self):
        if self.kind == "EBL" and self.lam is None:
            raise ValueError("EBL learner requires lam")
        return self

    @property
    def diffuse(self) -> bool:
        return self.prior_var is None


class Belief(BaseModel):
    """Subjective mean and variance of next period's dividend."""
    model_config = ConfigDict(frozen=True)

    subjective_mean: float
    subjective_var: float = Field(..., gt=0)
