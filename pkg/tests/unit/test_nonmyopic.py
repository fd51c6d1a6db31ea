"""
Non-myopic agents: adjusted Gaussian, demand recursion and price solvers
"""
import math

import numpy as np
import pytest

from app.core.exceptions import ParameterError
from app.models.schemas.economy import EconomyParams
from app.services.equilibrium import solve_myopic_prices
from app.services.nonmyopic import (
    adjusted_gaussian,
    brute_force_three_period_demand,
    brute_force_young_demand,
    decompose_sensitivity,
    demand_derivatives,
    demand_recursion,
    gral_max,
    q2_conditions,
    solve_nonmyopic_general,
    solve_nonmyopic_q2,
    tilted_density_mass,
)

GRID = [(1.05, 0.5), (1.1, 1.0), (1.1, 3.0), (1.5, 1.0)]


class TestAdjustedGaussian:

    def test_no_tilt_is_identity(self):
        result = adjusted_gaussian(0.0, 0.0, 0.0, 0.3, 2.0)
        assert result.m == pytest.approx(0.3)
        assert result.Sigma2 == pytest.approx(2.0)
        assert result.K == pytest.approx(1.0)

    def test_constant_tilt_scales_normalizer(self):
        assert adjusted_gaussian(1.5, 0.0, 0.0, 0.0, 1.0).log_K == pytest.approx(-1.5)

    def test_quadratic_tilt_shrinks_variance(self):
        result = adjusted_gaussian(0.0, 0.0, 0.5, 0.0, 1.0)
        assert result.Sigma2 == pytest.approx(0.5)

    @pytest.mark.parametrize("A,B,C,mu,sigma2", [(0.2, -0.4, 0.7, 0.5, 1.3), (-1.0, 1.0, 0.0, -0.3, 0.4), (0.0, 0.5, 1.9, 1.0, 2.5)])
    def test_tilted_mass_is_one(self, A, B, C, mu, sigma2):
        assert tilted_density_mass(A, B, C, mu, sigma2) == pytest.approx(1.0, abs=1e-8)

    def test_rejects_negative_curvature(self):
        with pytest.raises(ParameterError):
            adjusted_gaussian(0.0, 0.0, -0.1, 0.0, 1.0)

    def test_untilted_maximum_is_cara_demand(self):
        xstar, value = gral_max(0.0, 0.0, 0.0, 0.5, 2.0, 1.5, 0.2, 3.0)
        mean, var = 0.2 + 1.5 * 0.5, 1.5 ** 2 * 2.0
        assert xstar == pytest.approx(mean / (3.0 * var))
        assert value == pytest.approx(-math.exp(-0.5 * mean ** 2 / var))


class TestTwoPeriodSolver:

    @pytest.mark.parametrize("R,lam", GRID)
    def test_conditions_hold(self, R, lam):
        params = EconomyParams(q=2, R=R, lam=lam)
        solution = solve_nonmyopic_q2(params)
        residuals = q2_conditions(params, solution.alpha, solution.beta0, solution.beta1)
        assert np.max(np.abs(residuals)) <= 1e-9
        assert solution.l01 < 0

    @pytest.mark.parametrize("R,lam", GRID)
    def test_price_and_demand_signs(self, R, lam):
        params = EconomyParams(q=2, R=R, lam=lam)
        solution = solve_nonmyopic_q2(params)
        assert solution.alpha <= 0
        assert 0 < solution.beta1 < R * solution.beta0

        derivatives = demand_derivatives(solution, params)
        assert derivatives.young_d0 > 0 > derivatives.old_d0
        assert derivatives.young_d1 < 0 < derivatives.old_d1

    @pytest.mark.parametrize("R,lam", GRID)
    def test_decomposition_adds_up(self, R, lam):
        params = EconomyParams(q=2, R=R, lam=lam)
        split = decompose_sensitivity(solve_nonmyopic_q2(params), params)
        assert split.beliefs_term >= 0
        assert split.discount_term <= 0
        assert split.total > 0
        assert split.beliefs_term + split.discount_term + split.dynamic_term == pytest.approx(split.total, rel=1e-12)

    def test_recency_shapes(self):
        solutions = [solve_nonmyopic_q2(EconomyParams(q=2, R=1.1, lam=lam)) for lam in (0.5, 1.0, 3.0)]
        assert solutions[0].beta0 < solutions[1].beta0 < solutions[2].beta0
        assert solutions[0].beta1 > solutions[1].beta1 > solutions[2].beta1

    def test_differs_from_myopic(self):
        params = EconomyParams(q=2, R=1.1, lam=1.0)
        nonmyopic = solve_nonmyopic_q2(params).to_coefficients()
        assert not np.allclose(nonmyopic.as_vector(), solve_myopic_prices(params).as_vector())

    def test_requires_two_periods(self):
        with pytest.raises(ParameterError):
            solve_nonmyopic_q2(EconomyParams(q=3, R=1.1))


class TestRecursion:

    @pytest.mark.parametrize("R,lam", GRID)
    def test_table_clears_market(self, R, lam):
        params = EconomyParams(q=2, R=R, lam=lam)
        table = demand_recursion(params, solve_nonmyopic_q2(params).to_coefficients())
        np.testing.assert_allclose(table.market_clearing_residuals(), 0.0, atol=1e-9)
        assert np.all(table.as_matrix()[params.q] == 0.0)

    def test_young_loadings_mirror_old(self):
        params = EconomyParams(q=2, R=1.1, lam=1.0)
        solution = solve_nonmyopic_q2(params)
        young = demand_recursion(params, solution.to_coefficients()).delta_k[0]
        scale = params.gamma * (1.0 + solution.beta0) ** 2 * params.sigma ** 2
        assert young[0] == pytest.approx(-solution.l01 / scale, abs=1e-9)
        assert young[1] == pytest.approx(-solution.l11 / scale, abs=1e-9)

    @pytest.mark.slow
    def test_matches_direct_two_period_program(self):
        params = EconomyParams(q=2, R=1.1, lam=1.0)
        coeffs = solve_nonmyopic_q2(params).to_coefficients()
        row = demand_recursion(params, coeffs).as_matrix()[0]
        reduced = float(row @ np.array([1.0, 1.5, 0.5]))
        assert reduced == pytest.approx(brute_force_young_demand(params, coeffs, 1.5, 0.5), abs=1e-4)

    def test_rejects_tiny_risk_aversion(self):
        with pytest.raises(ParameterError):
            solve_nonmyopic_general(EconomyParams(q=3, R=1.1, gamma=1e-9))

    def test_general_solver_clears_market(self):
        solution = solve_nonmyopic_general(EconomyParams(q=3, R=1.1, lam=1.0))
        assert solution.coefficients.n_lags == 3
        assert np.max(np.abs(solution.table.market_clearing_residuals())) <= 1e-8

    @pytest.mark.parametrize("R,lam", GRID)
    def test_general_solver_matches_two_period_system(self, R, lam):
        params = EconomyParams(q=2, R=R, lam=lam)
        general = solve_nonmyopic_general(params).coefficients
        two_period = solve_nonmyopic_q2(params).to_coefficients()
        assert general.alpha == pytest.approx(two_period.alpha, rel=1e-8, abs=1e-8)
        np.testing.assert_allclose(general.betas, two_period.betas, rtol=1e-8, atol=1e-8)

    @pytest.mark.slow
    @pytest.mark.parametrize("rule", ["myopic", "nonmyopic"])
    def test_three_period_young_demand_matches_direct_program(self, rule):
        params = EconomyParams(q=3, R=1.1, lam=1.0)
        if rule == "myopic":
            coeffs = solve_myopic_prices(params)
        else:
            coeffs = solve_nonmyopic_general(params).coefficients
        dividends = (1.5, 0.5, 1.0)
        row = demand_recursion(params, coeffs).as_matrix()[0]
        reduced = float(row @ np.concatenate(([1.0], dividends)))
        direct = brute_force_three_period_demand(params, coeffs, dividends)
        assert reduced == pytest.approx(direct, abs=1e-4)

    def test_three_period_brute_force_needs_q3(self, toy_params):
        with pytest.raises(ParameterError):
            brute_force_three_period_demand(toy_params, solve_myopic_prices(toy_params), (1.0, 1.0, 1.0))
