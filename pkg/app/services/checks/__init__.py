"""
Invariant Suite
Named model properties behind the `check` command
"""
from app.services.checks.registry import REGISTRY, CheckContext, Outcome, register, run_checks

# Importing the property modules registers their checks
from app.services.checks import closed_forms, dynamics  # noqa: F401

__all__ = ["REGISTRY", "CheckContext", "Outcome", "register", "run_checks"]
