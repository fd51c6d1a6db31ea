"""
Solver Retry Logic
Restarts nonlinear solves that fail to converge instead of failing the whole run
"""
import logging
from functools import wraps
from tenacity import (
    retry,
    stop_after_attempt,
    wait_none,
    retry_if_exception_type,
    before_sleep_log,
    after_log,
)

from app.core.config import settings
from app.core.exceptions import SolverConvergenceError

logger = logging.getLogger(__name__)


# ============================================================================
# SOLVER CIRCUIT BREAKER
# ============================================================================

def with_solver_retry(func):
    """
    Decorator for root-finding attempts.

    The wrapped function must accept an ``attempt`` keyword (0-based). Each retry
    passes the next attempt number so the solver can switch method and perturb
    its starting point deterministically.

    Retries on:
    - SolverConvergenceError

    Strategy:
    - settings.solver_restarts attempts
    - No wait between attempts (pure computation)
    - Logs before each retry, re-raises the last error
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        state = {"attempt": 0}

        @retry(
            retry=retry_if_exception_type(SolverConvergenceError),
            stop=stop_after_attempt(settings.solver_restarts),
            wait=wait_none(),
            before_sleep=before_sleep_log(logger, logging.WARNING),
            after=after_log(logger, logging.DEBUG),
            reraise=True,
        )
        def attempt_once():
            attempt = state["attempt"]
            state["attempt"] += 1
            try:
                return func(*args, attempt=attempt, **kwargs)
            except SolverConvergenceError as e:
                logger.warning(
                    f"{func.__name__} attempt {attempt + 1} failed "
                    f"(method={e.method}, residual={e.residual:.3e}, iterations={e.iterations})"
                )
                raise

        return attempt_once()

    return wrapper
