"""
Experienced returns, old-young gaps, disagreement, turnover and CSV loaders
"""
import numpy as np
import pandas as pd
import pytest

from app.core.exceptions import DataFileError, DegenerateInputError, HistoryCoverageError, ParameterError
from app.services.measures import (
    deflate_returns,
    detrend_turnover,
    disagreement_std,
    experienced_returns,
    gap_series,
    group_gap,
    load_dividends,
    load_population,
    load_returns,
    moving_average,
)


@pytest.fixture
def returns(rng) -> pd.Series:
    return pd.Series(rng.normal(0.05, 0.2, 110), index=range(1900, 2010))


class TestExperiencedReturns:

    def test_equal_weights_give_lifetime_mean(self, returns):
        panel = experienced_returns(returns, 0.0, range(1900, 2010), years=[1980, 2009])
        for year, birth, value in panel.itertuples(index=False):
            assert value == pytest.approx(returns.loc[birth:year].mean(), abs=1e-12)

    def test_birth_year_return_included(self):
        returns = pd.Series([0.1, 0.2, 0.3], index=[2000, 2001, 2002])
        panel = experienced_returns(returns, 1.0, [2001], years=[2002])
        # age 1: weights (2/3, 1/3) on (0.3, 0.2)
        assert panel["experienced_return"].iloc[0] == pytest.approx(0.8 / 3.0)

    def test_skips_unborn_and_uncovered_cohorts(self, returns):
        panel = experienced_returns(returns, 1.0, [1890, 1960, 2005], years=[2000])
        assert list(panel["birth_year"]) == [1960]

    def test_gap_in_series_rejected(self):
        returns = pd.Series([0.1, 0.2, 0.3], index=[2000, 2001, 2003])
        with pytest.raises(HistoryCoverageError):
            experienced_returns(returns, 1.0, [2000])

    def test_survey_year_outside_data_rejected(self, returns):
        with pytest.raises(HistoryCoverageError):
            experienced_returns(returns, 1.0, [1960], years=[2020])


class TestCrossSection:

    def test_boom_then_bust(self, uniform_population):
        returns = pd.Series(
            np.concatenate((np.zeros(100), np.full(30, 0.3), np.full(30, -0.3))),
            index=range(1800, 1960),
        )
        panel = experienced_returns(returns, 1.0, range(1800, 1960), years=[1929, 1959])
        population = uniform_population([1929, 1959])
        assert group_gap(panel, population, 1929) < 0 < group_gap(panel, population, 1959)

    def test_invariant_to_population_scale(self, returns, uniform_population):
        panel = experienced_returns(returns, 1.0, range(1900, 2010), years=[2009])
        population = uniform_population([2009])
        population["population"] = np.linspace(0.5, 2.0, len(population))
        scaled = population.assign(population=population["population"] * 3.7)
        assert disagreement_std(panel, population, 2009) == pytest.approx(disagreement_std(panel, scaled, 2009), abs=1e-12)

    def test_empty_group_is_degenerate(self, returns, uniform_population):
        panel = experienced_returns(returns, 1.0, range(1990, 2010), years=[2009])
        with pytest.raises(DegenerateInputError):
            group_gap(panel, uniform_population([2009]), 2009)

    def test_gap_series_skips_degenerate_years(self, returns, uniform_population):
        panel = experienced_returns(returns, 1.0, range(1900, 2010), years=[1910, 2009])
        series = gap_series(panel, uniform_population([1910, 2009]))
        assert list(series["year"]) == [2009]

    def test_age_bands_must_not_overlap(self, returns, uniform_population):
        panel = experienced_returns(returns, 1.0, range(1900, 2010), years=[2009])
        with pytest.raises(ParameterError):
            group_gap(panel, uniform_population([2009]), 2009, old_min_age=40, young_max_age=45)

    def test_single_cohort_has_no_disagreement(self, returns):
        panel = experienced_returns(returns, 1.0, [1980], years=[2009])
        population = pd.DataFrame({"year": [2009], "birth_year": [1980], "population": [1.0]})
        with pytest.raises(DegenerateInputError):
            disagreement_std(panel, population, 2009)


class TestSeriesTransforms:

    def test_deflation(self):
        nominal = pd.Series([0.10, 0.21], index=[2001, 2002])
        cpi = pd.Series([100.0, 100.0, 110.0], index=[2000, 2001, 2002])
        real = deflate_returns(nominal, cpi)
        np.testing.assert_allclose(real.to_numpy(), [0.10, 0.10])

    def test_exact_trend_detrends_to_zero(self):
        years = np.arange(1950, 2011)
        series = pd.Series(np.exp(0.5 + 0.03 * (years - 1950)), index=years)
        np.testing.assert_allclose(detrend_turnover(series)["detrended"], 0.0, atol=1e-12)

    def test_detrend_rejects_non_positive(self):
        with pytest.raises(ParameterError):
            detrend_turnover(pd.Series([1.0, 0.0, 2.0], index=[2000, 2001, 2002]))

    def test_moving_average(self):
        series = pd.Series([1.0, 2.0, 3.0, 4.0], index=[2000, 2001, 2002, 2003])
        averaged = moving_average(series, 2)
        assert list(averaged.index) == [2002, 2003]
        np.testing.assert_allclose(averaged.to_numpy(), [2.0, 3.0])
        assert moving_average(series, 0).equals(series)


class TestLoaders:

    def test_returns_round_trip(self, tmp_path):
        path = tmp_path / "returns.csv"
        path.write_text("year,return\n2001,0.1\n2000,-0.05\n", encoding="utf-8")
        series = load_returns(path)
        assert series.loc[2001] == pytest.approx(0.1)

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "population.csv"
        path.write_text("year,cohort,people\n2000,1950,3\n", encoding="utf-8")
        with pytest.raises(DataFileError):
            load_population(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFileError):
            load_returns(tmp_path / "absent.csv")

    def test_non_numeric_cells(self, tmp_path):
        path = tmp_path / "returns.csv"
        path.write_text("year,return\n2000,abc\n", encoding="utf-8")
        with pytest.raises(DataFileError):
            load_returns(path)

    def test_dividends_keep_origin(self, tmp_path):
        path = tmp_path / "dividends.csv"
        path.write_text("time,dividend\n5,1.0\n6,1.5\n7,0.5\n", encoding="utf-8")
        history = load_dividends(path)
        assert history.origin_time == 5
        assert history.at(6) == 1.5

    def test_dividend_times_must_be_consecutive(self, tmp_path):
        path = tmp_path / "dividends.csv"
        path.write_text("time,dividend\n0,1.0\n2,1.5\n", encoding="utf-8")
        with pytest.raises(DataFileError):
            load_dividends(path)
