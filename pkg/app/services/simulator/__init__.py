"""
Simulator
Seeded equilibrium paths, moment estimates and predictability regressions
"""
from app.services.simulator.rng import make_generator, gaussian_draws
from app.services.simulator.engine import solve_regime, regime_demand_table, simulate, simulate_batch
from app.services.simulator.statistics import estimate_moments, predictability_regression

__all__ = [
    "make_generator",
    "gaussian_draws",
    "solve_regime",
    "regime_demand_table",
    "simulate",
    "simulate_batch",
    "estimate_moments",
    "predictability_regression",
]
