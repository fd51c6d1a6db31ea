"""
Check Schemas
Pass/fail report of the invariant suite
"""
from typing import Dict, List

from pydantic import BaseModel, Field, computed_field


class CheckResult(BaseModel):
    """Outcome of one named property."""

    name: str
    module: str
    passed: bool
    detail: str = ""
    metrics: Dict[str, float] = Field(default_factory=dict, description="Worst residuals, counts, statistics")
    duration_ms: float = 0.0


class CheckReport(BaseModel):
    quick: bool
    seed: int
    results: List[CheckResult]

    @computed_field
    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failed_names(self) -> List[str]:
        return [r.name for r in self.results if not r.passed]
