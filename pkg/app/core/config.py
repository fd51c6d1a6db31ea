"""
Unified Configuration
All tunables for solvers, simulation and artifact output in one place

SOURCES (highest priority first):
- Command-line flags (applied by the CLI on top of these settings)
- Environment variables prefixed with VINTAGE_
- .env file in the working directory
- Defaults below
"""
from typing import Optional
import logging
from pydantic_settings import BaseSettings
from pydantic import Field, model_validator

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """
    Application settings.
    Validated once at import time; solvers and the CLI read from the global instance.
    """

    # ============================================================================
    # RUNTIME
    # ============================================================================

    environment: str = Field(default="development", description="Environment: development/staging/production")
    debug: bool = Field(default=False, description="Debug mode")
    log_level: Optional[str] = Field(default=None, description="Override log level (DEBUG/INFO/WARNING)")

    # ============================================================================
    # OUTPUT
    # ============================================================================

    output_dir: str = Field(default="output", description="Default directory for CSV/JSON artifacts")

    # ============================================================================
    # NONLINEAR SOLVERS
    # ============================================================================

    solver_tolerance: float = Field(default=1e-10, gt=0, description="Residual infinity-norm accepted as converged")
    solver_max_iterations: int = Field(default=1000, ge=1, description="Iteration cap per solver attempt")
    solver_damping: float = Field(default=0.5, gt=0, le=1, description="Step shrink factor when the residual grows")
    solver_restarts: int = Field(default=3, ge=1, description="Attempts (with method switch and perturbed start) before giving up")
    max_trading_periods: int = Field(default=15, ge=2, description="Largest q admitted by the non-myopic solver")
    min_risk_aversion: float = Field(default=1e-6, gt=0, description="Smallest gamma admitted by the non-myopic solver")

    # ============================================================================
    # LEARNING
    # ============================================================================

    diffuse_prior_var: float = Field(default=1e12, gt=0, description="Prior variance used to encode a diffuse prior")

    # ============================================================================
    # SIMULATION
    # ============================================================================

    default_seed: int = Field(default=42, description="Seed used when none is given")
    simulation_workers: int = Field(default=4, ge=1, description="Thread pool size for path batches")

    # ============================================================================
    # EMPIRICAL MEASURES
    # ============================================================================

    max_lifetime_years: int = Field(default=74, ge=1, description="Longest lifetime window for experienced returns")

    # ============================================================================
    # PRODUCTION INFRASTRUCTURE
    # ============================================================================

    # Error tracking (Sentry)
    sentry_dsn: Optional[str] = Field(default=None, description="Sentry DSN for error tracking")

    @model_validator(mode='after')
    def validate_settings(self):
        """
        Validate settings at startup.

        CHECKS:
        - Warn if debug mode enabled in production
        - Warn if running in production without Sentry
        - Warn if the solver tolerance is looser than the residual checks downstream
        """
        if self.environment == "production":
            if self.debug:
                logger.warning("⚠️  DEBUG MODE ENABLED IN PRODUCTION!")

            if not self.sentry_dsn:
                logger.warning("⚠️  Sentry not configured in production. Error tracking disabled.")

        if self.solver_tolerance > 1e-9:
            logger.warning(
                f"⚠️  solver_tolerance={self.solver_tolerance:g} is looser than the 1e-9 residual checks"
            )

        logger.debug("=" * 80)
        logger.debug("Vintage Configuration Loaded")
        logger.debug("=" * 80)
        logger.debug(f"Environment: {self.environment}")
        logger.debug(f"Output dir: {self.output_dir}")
        logger.debug(f"Solver: tol={self.solver_tolerance:g} max_iter={self.solver_max_iterations} restarts={self.solver_restarts}")
        logger.debug(f"Sentry: {'✅ Configured' if self.sentry_dsn else '❌ Not configured'}")
        logger.debug("=" * 80)

        return self

    class Config:
        env_prefix = "VINTAGE_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"


# Global settings instance
settings = Settings()
