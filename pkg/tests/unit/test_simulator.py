"""
Simulator: seeded streams, paths, batches and estimation
"""
import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import DegenerateInputError, HistoryCoverageError, ParameterError
from app.models.schemas.economy import EconomyParams
from app.models.schemas.simulation import SimConfig
from app.services.equilibrium import price_moments
from app.services.simulator import (
    estimate_moments,
    gaussian_draws,
    make_generator,
    predictability_regression,
    simulate,
    simulate_batch,
)


@pytest.fixture
def config(toy_params) -> SimConfig:
    return SimConfig(seed=11, T=500, burn_in=4, params=toy_params)


class TestStreams:

    def test_same_key_same_draws(self):
        a = gaussian_draws(make_generator(3, 2), 100, 0.0, 1.0)
        b = gaussian_draws(make_generator(3, 2), 100, 0.0, 1.0)
        np.testing.assert_array_equal(a, b)

    def test_path_indices_are_independent_streams(self):
        a = gaussian_draws(make_generator(3, 0), 100, 0.0, 1.0)
        b = gaussian_draws(make_generator(3, 1), 100, 0.0, 1.0)
        assert not np.allclose(a, b)

    def test_location_and_scale(self):
        draws = gaussian_draws(make_generator(5), 50_000, 2.0, 0.5)
        assert np.all(np.isfinite(draws))
        assert draws.mean() == pytest.approx(2.0, abs=0.02)
        assert draws.std() == pytest.approx(0.5, abs=0.02)


class TestPaths:

    def test_reproducible(self, config):
        assert simulate(config).to_frame().equals(simulate(config).to_frame())

    def test_window_and_alignment(self, config):
        path = simulate(config)
        assert path.T == 500
        assert path.times[0] == config.burn_in
        np.testing.assert_array_equal(path.dividends, path.full_dividends[path.times])

    def test_prices_follow_rule_and_market_clears(self, config):
        path = simulate(config)
        coeffs = path.coefficients
        rebuilt = coeffs.alpha + path.lagged_dividends(coeffs.n_lags) @ np.asarray(coeffs.betas)
        np.testing.assert_allclose(rebuilt, path.prices, rtol=1e-12, atol=1e-9)
        np.testing.assert_allclose(path.holdings.mean(axis=1), 1.0, atol=1e-10)

    def test_excess_returns(self, config):
        path = simulate(config)
        R = config.params.R
        i = np.arange(path.T - 1)
        expected = path.prices[i + 1] + path.dividends[i + 1] - R * path.prices[i]
        np.testing.assert_allclose(path.excess_returns[:-1], expected, rtol=1e-12, atol=1e-9)

    def test_nonmyopic_regime_clears_market(self):
        params = EconomyParams(q=2, R=1.1, lam=1.0)
        path = simulate(SimConfig(seed=1, T=200, burn_in=5, params=params, regime="nonmyopic_q2"))
        np.testing.assert_allclose(path.holdings.mean(axis=1), 1.0, atol=1e-9)

    def test_frame_columns(self, config):
        frame = simulate(config).to_frame()
        assert list(frame.columns) == [
            "time", "dividend", "price", "excess_return", "tv", "holding_age_0", "holding_age_1",
        ]

    def test_burn_in_must_cover_memory(self, toy_params):
        with pytest.raises(ValidationError):
            SimConfig(T=10, burn_in=1, params=toy_params)

    def test_nonmyopic_regime_needs_two_periods(self):
        with pytest.raises(ValidationError):
            SimConfig(T=10, burn_in=5, params=EconomyParams(q=3, R=1.1), regime="nonmyopic_q2")

    def test_zero_shock_scale_gives_constant_prices(self, toy_params):
        path = simulate(SimConfig(seed=2, T=50, burn_in=4, params=toy_params, dividend_std=0.0))
        assert np.ptp(path.prices) < 1e-9
        np.testing.assert_allclose(path.tv, 0.0, atol=1e-12)


class TestBatches:

    def test_paths_in_index_order(self, config):
        paths = simulate_batch(config, n_paths=4, max_workers=3)
        assert [p.path_index for p in paths] == [0, 1, 2, 3]

    def test_batch_path_equals_single_path(self, config):
        paths = simulate_batch(config, n_paths=3, max_workers=2)
        single = simulate(config.model_copy(update={"path_index": 2}))
        assert paths[2].to_frame().equals(single.to_frame())

    def test_worker_count_does_not_change_results(self, config):
        one = simulate_batch(config, n_paths=3, max_workers=1)
        many = simulate_batch(config, n_paths=3, max_workers=3)
        for a, b in zip(one, many):
            assert a.to_frame().equals(b.to_frame())

    def test_rejects_empty_batch(self, config):
        with pytest.raises(ParameterError):
            simulate_batch(config, n_paths=0)


class TestEstimation:

    @pytest.mark.slow
    def test_moments_match_theory(self, toy_params):
        path = simulate(SimConfig(seed=42, T=100_000, burn_in=10, params=toy_params))
        estimated = estimate_moments(path, max_lag=2)
        theory = price_moments(path.coefficients, toy_params.sigma, max_lag=2)
        assert abs(estimated.variance - theory.variance) < 3 * estimated.variance_se
        assert abs(estimated.autocov[0] - theory.autocov_at(1)) < 3 * estimated.autocov_se[0]
        assert abs(estimated.autocov[1]) < 3 * estimated.autocov_se[1]

    @pytest.mark.slow
    def test_only_recent_dividends_predict_returns(self, toy_params):
        path = simulate(SimConfig(seed=42, T=100_000, burn_in=4, params=toy_params))
        fit = predictability_regression(path, lags=4)
        t_values = np.abs(np.asarray(fit.t_values[1:]))
        assert np.any(t_values[:2] > 3.0)
        assert np.all(t_values[2:] < 3.0)
        assert fit.names == ("const", "d_t", "d_t-1", "d_t-2", "d_t-3")

    def test_short_path_rejected(self, toy_params):
        path = simulate(SimConfig(seed=1, T=15, burn_in=4, params=toy_params))
        with pytest.raises(HistoryCoverageError):
            estimate_moments(path, max_lag=2)

    def test_regression_needs_burn_in_for_lags(self, toy_params):
        path = simulate(SimConfig(seed=1, T=200, burn_in=2, params=toy_params))
        with pytest.raises(HistoryCoverageError):
            predictability_regression(path, lags=4)

    def test_regression_rejects_too_few_lags(self, config):
        with pytest.raises(ParameterError):
            predictability_regression(simulate(config), lags=1)

    def test_constant_dividends_are_degenerate(self, toy_params):
        path = simulate(SimConfig(seed=2, T=100, burn_in=4, params=toy_params, dividend_std=0.0))
        with pytest.raises(DegenerateInputError):
            predictability_regression(path, lags=2)
