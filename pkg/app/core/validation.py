"""
Validation utilities for parameters shared across solvers
"""
from app.core.exceptions import ParameterError
from app.models.schemas.economy import EconomyParams


def require_two_periods(params: EconomyParams, what: str) -> None:
    """
    Reject economies whose agents do not trade exactly twice.

    Args:
        params: Economy parameters
        what: Name of the result that only exists for q=2 (used in the message)

    Raises:
        ParameterError: If q != 2
    """
    if params.q != 2:
        raise ParameterError(f"{what} is defined for q=2, got q={params.q}", details={"q": params.q})


def is_trading(params: EconomyParams, birth_time: int, now: int) -> bool:
    """True when the cohort born at birth_time holds the asset at `now`."""
    return 0 <= now - birth_time <= params.q - 1


def require_trading(params: EconomyParams, birth_time: int, now: int) -> int:
    """
    Age of a trading cohort.

    Raises:
        ParameterError: If the cohort is unborn or has left the market at `now`
    """
    if not is_trading(params, birth_time, now):
        raise ParameterError(
            f"cohort born at {birth_time} does not trade at {now}",
            details={"birth_time": birth_time, "now": now, "q": params.q},
        )
    return now - birth_time
