"""
Check Registry
Named properties of the model, each runnable at full or reduced size

A check is a function of a CheckContext returning an Outcome. Checks never
raise for a failed property; an unexpected exception is reported as a failure
of that check and the suite moves on.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from app.models.schemas.checks import CheckReport, CheckResult
from app.services.simulator.rng import make_generator

logger = logging.getLogger(__name__)


@dataclass
class CheckContext:
    quick: bool
    seed: int
    index: int = 0

    def rng(self) -> np.random.Generator:
        """Stream of its own for every check, so checks can be run in any subset."""
        return make_generator(self.seed, self.index)

    def size(self, full: int, quick: int) -> int:
        return quick if self.quick else full


@dataclass
class Outcome:
    passed: bool
    detail: str = ""
    metrics: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Check:
    name: str
    module: str
    run: Callable[[CheckContext], Outcome]


REGISTRY: List[Check] = []


def register(name: str, module: str) -> Callable[[Callable[[CheckContext], Outcome]], Callable[[CheckContext], Outcome]]:
    """Add a property to the suite under a unique name."""

    def decorator(func: Callable[[CheckContext], Outcome]) -> Callable[[CheckContext], Outcome]:
        if any(c.name == name for c in REGISTRY):
            raise ValueError(f"check {name!r} registered twice")
        REGISTRY.append(Check(name=name, module=module, run=func))
        return func

    return decorator


def violations(count: int, total: int, what: str) -> Outcome:
    """Outcome for an exhaustive property: passes with zero violations."""
    return Outcome(
        passed=count == 0,
        detail=f"{count} of {total} {what} violated",
        metrics={"violations": float(count), "cases": float(total)},
    )


def within(worst: float, tolerance: float, what: str) -> Outcome:
    """Outcome for a numerical identity: passes when the worst error is within tolerance."""
    ok = bool(np.isfinite(worst)) and worst <= tolerance
    return Outcome(
        passed=ok,
        detail=f"{what}: worst error {worst:.3e} (tolerance {tolerance:g})",
        metrics={"worst_error": float(worst), "tolerance": tolerance},
    )


def run_checks(quick: bool = False, seed: int = 42, names: Optional[List[str]] = None) -> CheckReport:
    """
    Run every registered check (or the named subset) and collect the report.

    Args:
        quick: Reduced sample sizes
        seed: Root seed; each check draws from its own substream
        names: Restrict to these check names

    Returns:
        CheckReport; `passed` is True only if every check passed
    """
    selected = REGISTRY if names is None else [c for c in REGISTRY if c.name in names]
    results = []
    for index, check in enumerate(REGISTRY):
        if check not in selected:
            continue
        context = CheckContext(quick=quick, seed=seed, index=index)
        start = time.time()
        try:
            outcome = check.run(context)
        except Exception as e:
            logger.error(f"Check {check.name} raised {type(e).__name__}: {e}", exc_info=True)
            outcome = Outcome(passed=False, detail=f"raised {type(e).__name__}: {e}")
        duration_ms = (time.time() - start) * 1000

        status = "✅" if outcome.passed else "❌"
        logger.info(f"{status} {check.module}.{check.name} ({duration_ms:.0f}ms) {outcome.detail}")
        results.append(
            CheckResult(
                name=check.name,
                module=check.module,
                passed=outcome.passed,
                detail=outcome.detail,
                metrics=outcome.metrics,
                duration_ms=round(duration_ms, 2),
            )
        )

    report = CheckReport(quick=quick, seed=seed, results=results)
    logger.info(f"Invariant suite: {sum(r.passed for r in results)}/{len(results)} passed")
    return report
