"""
Trade Volume Schemas
"""
from typing import Dict, Literal
from pydantic import BaseModel, ConfigDict, Field

TradeConvention = Literal["entry_exit", "interior"]


class TradeVolumePoint(BaseModel):
    """
    Trade volume at `time` with the per-cohort position changes behind it.
    tv^2 = (1/q) * sum(per_cohort_changes^2).
    """
    model_config = ConfigDict(frozen=True)

    time: int
    tv: float = Field(..., ge=0)
    per_cohort_changes: Dict[int, float]
    convention: TradeConvention
