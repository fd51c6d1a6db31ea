"""
Equilibrium
Myopic linear equilibrium: prices, demands, moments, benchmark
"""
from app.services.equilibrium.myopic import (
    average_weights,
    solve_myopic_prices,
    toy_price_coefficients,
    recursion_residuals,
    price_series,
    price_moments,
    excess_return_coeffs,
    benchmark_known_mean,
)
from app.services.equilibrium.demand import (
    cara_static_demand,
    demand_table,
    payoff_state_vector,
    recent_state,
    state_width,
    expected_excess_payoff,
    myopic_demand,
    cohort_demands,
    demand_sensitivity,
    holding_gap,
)

__all__ = [
    "average_weights",
    "solve_myopic_prices",
    "toy_price_coefficients",
    "recursion_residuals",
    "price_series",
    "price_moments",
    "excess_return_coeffs",
    "benchmark_known_mean",
    "cara_static_demand",
    "demand_table",
    "payoff_state_vector",
    "recent_state",
    "state_width",
    "expected_excess_payoff",
    "myopic_demand",
    "cohort_demands",
    "demand_sensitivity",
    "holding_gap",
]
