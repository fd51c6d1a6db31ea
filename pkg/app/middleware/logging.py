"""
Command Logging Middleware
Logs every CLI command with its exit status and timing information
"""
import logging
import time
from functools import wraps
from typing import Callable

logger = logging.getLogger(__name__)


def log_command(name: str) -> Callable[[Callable[..., int]], Callable[..., int]]:
    """
    Command logging decorator.
    Logs start, exit status and duration of the wrapped command.
    """

    def decorator(command: Callable[..., int]) -> Callable[..., int]:
        @wraps(command)
        def wrapper(*args, **kwargs) -> int:
            # Start timer
            start_time = time.time()
            logger.info(f"▶️  {name}")

            # Run command
            exit_code = command(*args, **kwargs)

            # Calculate duration
            duration_ms = (time.time() - start_time) * 1000

            # Log command details
            log = logger.info if exit_code == 0 else logger.warning
            log(
                f"{name} - exit {exit_code} ({duration_ms:.2f}ms)",
                extra={
                    "command": name,
                    "exit_code": exit_code,
                    "duration_ms": round(duration_ms, 2),
                },
            )
            return exit_code

        return wrapper

    return decorator
