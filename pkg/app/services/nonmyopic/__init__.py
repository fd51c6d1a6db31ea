"""
Non-Myopic Agents
Adjusted-Gaussian reduction, backward demand recursion and market-clearing solvers
"""
from app.services.nonmyopic.gaussian import (
    adjusted_gaussian,
    adjusted_gaussian_for,
    tilted_density_mass,
    gral_max,
)
from app.services.nonmyopic.recursion import check_admissible, demand_recursion, run_recursion
from app.services.nonmyopic.solver import (
    q2_terms,
    q2_intercept,
    q2_conditions,
    solve_nonmyopic_q2,
    solve_nonmyopic_general,
)
from app.services.nonmyopic.decomposition import demand_derivatives, decompose_sensitivity
from app.services.nonmyopic.brute_force import (
    brute_force_gral_max,
    brute_force_three_period_demand,
    brute_force_young_demand,
)

__all__ = [
    "adjusted_gaussian",
    "adjusted_gaussian_for",
    "tilted_density_mass",
    "gral_max",
    "check_admissible",
    "demand_recursion",
    "run_recursion",
    "q2_terms",
    "q2_intercept",
    "q2_conditions",
    "solve_nonmyopic_q2",
    "solve_nonmyopic_general",
    "demand_derivatives",
    "decompose_sensitivity",
    "brute_force_gral_max",
    "brute_force_three_period_demand",
    "brute_force_young_demand",
]
