"""
Cohort-size shocks and population growth
"""
import numpy as np
import pytest

from app.core.exceptions import HistoryCoverageError, ParameterError
from app.models.schemas.beliefs import DividendHistory
from app.models.schemas.demographics import DemographicShock, GrowthParams
from app.models.schemas.economy import EconomyParams
from app.services.demographics import (
    growth_price_path,
    impulse_dividends,
    shock_clearing_residuals,
    shock_price_path,
    solve_growth_pricing,
    solve_shock_pricing,
)
from app.services.equilibrium import toy_price_coefficients


class TestCohortShock:

    @pytest.mark.parametrize("lam", [0.0, 1.0, 3.0])
    def test_no_shock_reproduces_baseline(self, lam):
        pricing = solve_shock_pricing(EconomyParams(q=2, R=1.1, lam=lam), DemographicShock(y=0.5, y_tau=0.5))
        np.testing.assert_allclose(pricing.at_tau(), pricing.baseline(), rtol=1e-12)
        np.testing.assert_allclose(pricing.at_tau1(), pricing.baseline(), rtol=1e-12)

    def test_baseline_intercept_per_unit_mass(self):
        params = EconomyParams(q=2, R=1.1, lam=1.0)
        pricing = solve_shock_pricing(params, DemographicShock(y=0.25, y_tau=0.4))
        assert pricing.alpha_base == pytest.approx(toy_price_coefficients(params).alpha / 0.5)

    @pytest.mark.parametrize("y_tau", [0.25, 0.6, 1.4])
    def test_markets_clear(self, y_tau, rng):
        params = EconomyParams(q=2, R=1.1, lam=3.0)
        shock = DemographicShock(y=0.5, y_tau=y_tau)
        for _ in range(10):
            residuals = shock_clearing_residuals(params, shock, *rng.normal(1.0, 1.0, 3))
            np.testing.assert_allclose(residuals, 0.0, atol=1e-10)

    def test_loadings_rise_with_cohort_size(self):
        params = EconomyParams(q=2, R=1.1, lam=3.0)
        sweep = [solve_shock_pricing(params, DemographicShock(y=0.5, y_tau=y)) for y in (0.25, 0.5, 0.75)]
        assert sweep[0].b0_tau < sweep[1].b0_tau < sweep[2].b0_tau
        assert sweep[0].b1_tau1 < sweep[1].b1_tau1 < sweep[2].b1_tau1
        assert sweep[0].b0_tau == pytest.approx(9.283, abs=1e-3)
        assert sweep[2].b1_tau1 == pytest.approx(0.6346, abs=1e-4)

    def test_requires_two_periods(self):
        with pytest.raises(ParameterError):
            solve_shock_pricing(EconomyParams(q=3, R=1.1), DemographicShock(y_tau=0.7))


class TestShockPath:

    def test_impulse_layout(self):
        history = impulse_dividends(1.0, tau=10, k=2, shock_size=0.5)
        assert history.origin_time == 7
        assert history.end_time == 13
        assert history.at(10) == 1.5
        assert history.at(9) == history.at(11) == 1.0

    def test_path_differs_only_in_shock_window(self):
        params = EconomyParams(q=2, R=1.1, lam=1.0)
        shock = DemographicShock(tau=10, y=0.5, y_tau=0.75)
        path = shock_price_path(params, shock, impulse_dividends(1.0, tau=10, k=3))
        outside = ~path["time"].isin([10, 11])
        np.testing.assert_allclose(path.loc[outside, "price"], path.loc[outside, "baseline_price"])
        assert not np.allclose(path.loc[~outside, "price"], path.loc[~outside, "baseline_price"])
        assert np.isnan(path["excess_return"].iloc[-1])

    def test_unshocked_path_matches_baseline(self):
        params = EconomyParams(q=2, R=1.1, lam=1.0)
        shock = DemographicShock(tau=4, y=0.5, y_tau=0.5)
        path = shock_price_path(params, shock, impulse_dividends(1.0, tau=4, k=2, shock_size=1.0))
        np.testing.assert_allclose(path["price"], path["baseline_price"], rtol=1e-12)

    def test_path_must_cover_window(self):
        shock = DemographicShock(tau=20, y_tau=0.7)
        with pytest.raises(HistoryCoverageError):
            shock_price_path(EconomyParams(q=2, R=1.1), shock, DividendHistory.from_values(np.ones(5)))


class TestGrowth:

    @pytest.mark.parametrize("y0", [0.25, 0.5, 1.0])
    def test_zero_growth_reproduces_baseline(self, y0):
        params = EconomyParams(q=2, R=1.1, lam=1.0)
        toy = toy_price_coefficients(params)
        pricing = solve_growth_pricing(params, GrowthParams(g=0.0, y0=y0))
        assert pricing.beta0 == pytest.approx(toy.betas[0], rel=1e-12)
        assert pricing.beta1 == pytest.approx(toy.betas[1], rel=1e-12)
        assert pricing.alpha0 == pytest.approx(toy.alpha / (2.0 * y0), rel=1e-12)

    def test_recent_reliance_rises_with_growth(self):
        params = EconomyParams(q=2, R=1.1, lam=3.0)
        shares = [solve_growth_pricing(params, GrowthParams(g=g)).recent_reliance for g in (0.0, 0.02, 0.1)]
        assert shares[0] < shares[1] < shares[2]

    def test_rate_must_exceed_shrink_factor(self):
        with pytest.raises(ParameterError):
            solve_growth_pricing(EconomyParams(q=2, R=1.01), GrowthParams(g=-0.5))

    def test_intercept_decays_along_path(self):
        params = EconomyParams(q=2, R=1.1, lam=1.0)
        pricing = solve_growth_pricing(params, GrowthParams(g=0.05))
        path = growth_price_path(pricing, DividendHistory.from_values(np.full(6, 2.0)))
        assert list(path["time"]) == [1, 2, 3, 4, 5]
        expected = pricing.alpha0 * 1.05 ** -np.arange(1, 6) + (pricing.beta0 + pricing.beta1) * 2.0
        np.testing.assert_allclose(path["price"], expected)
