"""
Vintage - Experience-Based Learning Asset Pricing
=================================================
Version: 1.0.0

Command-line entry point.

Architecture:
- app/core/: Configuration, exceptions, solver retries, validation
- app/middleware/: Error handling and command logging
- app/models/: Pydantic schemas
- app/services/: Beliefs, equilibria, trade volume, demographics, simulation, measures, checks
- app/cli/: Parser, command handlers, artifact writers

Usage:
    python main.py solve-myopic --q 2 --R 1.1 --lambda 0
    python main.py simulate --seed 42 --T 1000
    python main.py check --quick
"""
import logging
import sys
from typing import List, Optional

from app import __version__
from app.cli import COMMANDS, build_parser, resolve_config
from app.core.config import settings
from app.middleware.error_handler import handle_errors

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    """Logs go to stderr; stdout carries only the JSON report."""
    default = logging.INFO if settings.environment == "production" else logging.DEBUG
    level = getattr(logging, settings.log_level.upper(), default) if settings.log_level else default
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


# ============================================================================
# SENTRY ERROR TRACKING
# ============================================================================

def configure_sentry() -> None:
    if not settings.sentry_dsn:
        logger.debug("ℹ️  Sentry not configured (VINTAGE_SENTRY_DSN not set)")
        return
    try:
        import sentry_sdk
        from sentry_sdk.integrations.logging import LoggingIntegration

        sentry_sdk.init(
            dsn=settings.sentry_dsn,
            environment=settings.environment,
            release=f"vintage@{__version__}",
            integrations=[LoggingIntegration(level=logging.INFO, event_level=logging.ERROR)],
        )
        logger.info("✅ Sentry error tracking initialized")
    except Exception as e:
        logger.warning(f"⚠️  Failed to initialize Sentry: {e}")


# ============================================================================
# DISPATCH
# ============================================================================

@handle_errors
def dispatch(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = resolve_config(args)
    return COMMANDS[args.command](args, config)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    configure_logging()
    configure_sentry()
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
