"""
Global Error Handler Middleware
Catches every exception a command raises and turns it into an exit code
plus one machine-readable JSON line on stderr
"""
import json
import logging
import sys
from functools import wraps
from typing import Any, Callable, Dict, Tuple

from pydantic import ValidationError

from app.core.exceptions import VintageError

logger = logging.getLogger(__name__)

EXIT_VALIDATION = 1
EXIT_SOLVER = 2
EXIT_IO = 3
EXIT_CHECKS_FAILED = 4


def classify(exc: BaseException) -> Tuple[int, Dict[str, Any]]:
    """Exit code and error document for an exception."""
    if isinstance(exc, VintageError):
        return exc.exit_code, exc.to_dict()
    if isinstance(exc, ValidationError):
        return EXIT_VALIDATION, {
            "error": "ValidationError",
            "message": f"{exc.error_count()} validation error(s)",
            "exit_code": EXIT_VALIDATION,
            "details": {"errors": json.loads(exc.json(include_url=False))},
        }
    if isinstance(exc, OSError):
        return EXIT_IO, {
            "error": type(exc).__name__,
            "message": str(exc),
            "exit_code": EXIT_IO,
            "details": {"path": getattr(exc, "filename", None)},
        }
    return EXIT_VALIDATION, {
        "error": type(exc).__name__,
        "message": str(exc),
        "exit_code": EXIT_VALIDATION,
        "details": {},
    }


def handle_errors(command: Callable[..., int]) -> Callable[..., int]:
    """
    Global error handler for a command.
    Logs the traceback and prints the error document on stderr.
    """

    @wraps(command)
    def wrapper(*args, **kwargs) -> int:
        try:
            return command(*args, **kwargs)
        except Exception as exc:
            exit_code, document = classify(exc)

            # Log the full exception with traceback
            logger.error(
                f"Command failed with {document['error']}",
                exc_info=True,
                extra={"command": command.__name__, "exit_code": exit_code, "error_type": document["error"]},
            )

            print(json.dumps(document, default=str), file=sys.stderr)
            return exit_code

    return wrapper
