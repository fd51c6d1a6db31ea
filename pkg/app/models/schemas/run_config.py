"""
Run Configuration
JSON document read by `--config`; command-line flags override its values
"""
import json
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from app.core.exceptions import DataFileError
from app.models.schemas.economy import EconomyParams
from app.models.schemas.simulation import Regime


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class EconomySection(_Section):
    q: int = Field(2, ge=1)
    R: float = Field(1.1, gt=1)
    gamma: float = Field(1.0, gt=0)
    sigma: float = Field(1.0, gt=0)
    theta: float = 1.0
    lam: float = Field(0.0, alias="lambda")

    def to_params(self) -> EconomyParams:
        return EconomyParams(q=self.q, R=self.R, gamma=self.gamma, sigma=self.sigma, theta=self.theta, lam=self.lam)


class SimulationSection(_Section):
    seed: Optional[int] = None
    T: int = Field(1000, ge=1)
    burn_in: Optional[int] = Field(None, ge=1, description="Defaults to the longest lag the regressions and price rule need")
    regime: Regime = "myopic"
    n_paths: int = Field(1, ge=1)
    workers: Optional[int] = Field(None, ge=1)
    dividend_std: Optional[float] = Field(None, ge=0)
    include_entry_exit: bool = False
    coefficients: Optional[str] = Field(None, description="Saved solution JSON to reuse")
    max_lag: Optional[int] = Field(None, ge=1, description="Moment lags; defaults to q+1")
    regression_lags: Optional[int] = Field(None, ge=1, description="Dividend regressors; defaults to q+2")


class TradeVolumeSection(_Section):
    dividends: Optional[str] = Field(None, description="CSV with columns time,dividend; simulated when absent")
    T: int = Field(200, ge=1)
    seed: Optional[int] = None
    include_entry_exit: bool = False
    d_bar: float = 1.0
    shock: float = 1.0


class ShockSection(_Section):
    tau: int = 0
    y: float = Field(0.5, gt=0)
    y_tau: float = Field(0.75, gt=0)
    k: int = Field(5, ge=0, description="Dates shown on each side of the shock window")
    dividend_shock: float = 1.0
    sweep: List[float] = Field(default_factory=lambda: [0.25, 0.375, 0.5, 0.625, 0.75])


class GrowthSection(_Section):
    g: float = Field(0.02, gt=-1)
    y0: float = Field(0.5, gt=0)
    periods: int = Field(20, ge=2)
    sweep: List[float] = Field(default_factory=lambda: [0.0, 0.02, 0.1])


class MeasuresSection(_Section):
    returns: Optional[str] = None
    population: Optional[str] = None
    turnover: Optional[str] = None
    cpi: Optional[str] = None
    lam: float = Field(1.0, alias="lambda")
    first_cohort: Optional[int] = None
    last_cohort: Optional[int] = None
    old_min_age: int = 60
    young_max_age: int = 39
    ma_lags: int = Field(4, ge=0)


class RunConfig(_Section):
    """Every command reads the sections it needs and ignores the rest."""

    economy: EconomySection = Field(default_factory=EconomySection)
    simulation: SimulationSection = Field(default_factory=SimulationSection)
    trade_volume: TradeVolumeSection = Field(default_factory=TradeVolumeSection)
    shock: ShockSection = Field(default_factory=ShockSection)
    growth: GrowthSection = Field(default_factory=GrowthSection)
    measures: MeasuresSection = Field(default_factory=MeasuresSection)
    output_dir: Optional[str] = None
    format: Literal["csv", "json"] = "csv"

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        """Parse a JSON config file; schema errors surface as pydantic ValidationError."""
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as e:
            raise DataFileError(f"config file not found: {path}", details={"path": str(path)}) from e
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise DataFileError(f"config file is not valid JSON: {e}", details={"path": str(path)}) from e
        return cls.model_validate(data)
