"""
Myopic equilibrium: price rule, moments, demands and the known-mean benchmark
"""
import numpy as np
import pytest

from app.core.exceptions import ParameterError
from app.models.schemas.beliefs import DividendHistory
from app.models.schemas.economy import EconomyParams
from app.services.equilibrium import (
    benchmark_known_mean,
    cohort_demands,
    demand_sensitivity,
    excess_return_coeffs,
    holding_gap,
    price_moments,
    price_series,
    recursion_residuals,
    solve_myopic_prices,
    toy_price_coefficients,
)


class TestTwoPeriodValues:

    def test_reference_coefficients(self, toy_coeffs):
        assert toy_coeffs.betas[0] == pytest.approx(7.962963, abs=1e-6)
        assert toy_coeffs.betas[1] == pytest.approx(2.037037, abs=1e-6)
        assert toy_coeffs.alpha == pytest.approx(-803.347, abs=1e-3)

    @pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 3.0, 5.0])
    def test_general_formula_matches_closed_form(self, lam):
        params = EconomyParams(q=2, R=1.1, lam=lam)
        general, toy = solve_myopic_prices(params), toy_price_coefficients(params)
        np.testing.assert_allclose(general.as_vector(), toy.as_vector(), rtol=1e-12)

    def test_reference_moments(self, toy_coeffs):
        moments = price_moments(toy_coeffs, 1.0)
        assert moments.variance == pytest.approx(67.558, abs=1e-3)
        assert moments.autocov_at(1) == pytest.approx(16.221, abs=1e-3)
        assert moments.autocov_at(2) == 0.0

    def test_closed_form_needs_two_periods(self):
        with pytest.raises(ParameterError):
            toy_price_coefficients(EconomyParams(q=3, R=1.1))


class TestPriceRule:

    @pytest.mark.parametrize("q", [2, 3, 5, 10])
    @pytest.mark.parametrize("lam", [0.5, 1.0, 3.0])
    def test_loadings_positive_and_decreasing(self, q, lam):
        betas = np.asarray(solve_myopic_prices(EconomyParams(q=q, R=1.1, lam=lam)).betas)
        assert betas[-1] > 0
        assert np.all(np.diff(betas) < 0)

    def test_recursion_holds(self):
        params = EconomyParams(q=6, R=1.05, lam=1.5)
        coeffs = solve_myopic_prices(params)
        assert np.max(np.abs(recursion_residuals(params, coeffs))) <= 1e-12 * (1.0 + coeffs.beta0)

    def test_beta0_rises_with_recency(self):
        beta0 = [solve_myopic_prices(EconomyParams(q=5, R=1.1, lam=lam)).beta0 for lam in (0.0, 1.0, 3.0)]
        assert beta0[0] < beta0[1] < beta0[2]

    def test_recency_limit(self):
        coeffs = solve_myopic_prices(EconomyParams(q=2, R=1.1, lam=60.0))
        assert coeffs.betas[0] == pytest.approx(1.0 / 0.1, abs=1e-6)
        assert abs(coeffs.betas[1]) < 1e-6

    def test_price_series_alignment(self, toy_coeffs):
        prices = price_series(toy_coeffs, np.array([1.0, 2.0, 3.0]))
        b0, b1 = toy_coeffs.betas
        np.testing.assert_allclose(prices, [toy_coeffs.alpha + 2 * b0 + b1, toy_coeffs.alpha + 3 * b0 + 2 * b1])

    def test_excess_payoff_loadings_stop_at_q(self, toy_coeffs):
        rule = excess_return_coeffs(toy_coeffs, 1.1)
        assert rule.next_dividend_loading == pytest.approx(1.0 + toy_coeffs.beta0)
        assert rule.loading(1) == pytest.approx(-1.1 * toy_coeffs.betas[1])
        assert rule.loading(5) == 0.0


class TestDemands:

    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_market_clears(self, q, rng):
        params = EconomyParams(q=q, R=1.1, lam=1.0)
        coeffs = solve_myopic_prices(params)
        for _ in range(10):
            history = DividendHistory.from_values(rng.normal(1.0, 1.0, q + 3))
            assert cohort_demands(params, coeffs, history, history.end_time).mean_holding == pytest.approx(1.0, abs=1e-10)

    def test_older_hold_less_after_rising_dividends(self):
        params = EconomyParams(q=4, R=1.1, lam=1.0)
        coeffs = solve_myopic_prices(params)
        history = DividendHistory.from_values([1.0, 1.5, 2.0, 3.0])
        t = history.end_time
        assert holding_gap(params, coeffs, history, t - 3, 1, t) < 0

    def test_sensitivity_splits_into_channels(self, toy_params, toy_coeffs):
        sensitivity = demand_sensitivity(toy_params, toy_coeffs, birth_time=4, now=5, lag=0)
        assert sensitivity.age == 1
        assert sensitivity.total == pytest.approx(sensitivity.belief_channel + sensitivity.price_channel)

    def test_sensitivity_rejects_lag_beyond_memory(self, toy_params, toy_coeffs):
        with pytest.raises(ParameterError):
            demand_sensitivity(toy_params, toy_coeffs, birth_time=4, now=5, lag=2)


class TestBenchmark:

    def test_known_mean_price(self, toy_params):
        benchmark = benchmark_known_mean(toy_params)
        assert benchmark.price == pytest.approx(0.0)
        assert benchmark.holding == 1.0

    def test_price_scales_with_mean(self):
        benchmark = benchmark_known_mean(EconomyParams(q=2, R=1.05, theta=3.0, gamma=2.0, sigma=0.5))
        assert benchmark.price == pytest.approx((3.0 - 0.5) / 0.05)
