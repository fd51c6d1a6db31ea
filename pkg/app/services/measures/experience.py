"""
Experience Measures
Experienced returns by cohort and the cross-cohort statistics built on them

Tables are long-format pandas frames:
- returns: Series indexed by year
- population: columns year, birth_year, population
- experience panel: columns year, birth_year, experienced_return
"""
import logging
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from app.core.config import settings
from app.core.exceptions import DegenerateInputError, HistoryCoverageError, ParameterError
from app.services.beliefs.weights import experience_weights

logger = logging.getLogger(__name__)

PANEL_COLUMNS = ["year", "birth_year", "experienced_return"]


def require_contiguous(series: pd.Series, what: str = "returns") -> pd.Series:
    """Sorted copy; raises on duplicated or missing years."""
    if series.empty:
        raise HistoryCoverageError(f"{what} series is empty")
    ordered = series.sort_index()
    years = ordered.index.to_numpy()
    if ordered.index.has_duplicates:
        raise HistoryCoverageError(f"{what} series has duplicated years")
    gaps = np.flatnonzero(np.diff(years) != 1)
    if len(gaps):
        raise HistoryCoverageError(
            f"{what} series has a gap after {int(years[gaps[0]])}",
            details={"missing_after": [int(years[i]) for i in gaps]},
        )
    return ordered


def experienced_returns(
    returns: pd.Series,
    lam: float,
    cohorts: Iterable[int],
    years: Optional[Iterable[int]] = None,
    max_age: Optional[int] = None,
) -> pd.DataFrame:
    """
    panel[y, b] = sum_k w(k, lam, y - b) * r_{y-k}, birth-year return included.

    Args:
        returns: Annual returns indexed by year (decimal)
        lam: Recency parameter
        cohorts: Birth years to evaluate
        years: Survey years (default: every year of the series)
        max_age: Longest lifetime window (default settings.max_lifetime_years)

    Returns:
        Long panel with one row per (year, birth_year) the data covers
    """
    series = require_contiguous(returns)
    first, last = int(series.index[0]), int(series.index[-1])
    values = series.to_numpy(dtype=float)
    max_age = settings.max_lifetime_years if max_age is None else max_age
    survey_years = range(first, last + 1) if years is None else years

    rows = []
    for year in survey_years:
        if year < first or year > last:
            raise HistoryCoverageError(f"no return for survey year {year}", details={"first": first, "last": last})
        for birth in cohorts:
            age = year - birth
            # unborn, too old, or born before the data starts
            if age < 0 or age > max_age or birth < first:
                continue
            lifetime = values[birth - first: year - first + 1][::-1]
            rows.append((year, birth, float(np.dot(experience_weights(lam, age), lifetime))))

    panel = pd.DataFrame(rows, columns=PANEL_COLUMNS)
    logger.debug(f"Experienced returns: {len(panel)} cells, lambda={lam}")
    return panel


def _cohorts_at(panel: pd.DataFrame, population: pd.DataFrame, year: int) -> pd.DataFrame:
    cells = panel[panel["year"] == year].merge(
        population[population["year"] == year], on=["year", "birth_year"], how="inner"
    )
    if (cells["population"] < 0).any():
        raise ParameterError(f"negative population counts in {year}")
    cells = cells.assign(age=cells["year"] - cells["birth_year"])
    return cells


def _weighted_mean(cells: pd.DataFrame, label: str, year: int) -> float:
    total = cells["population"].sum()
    if cells.empty or total <= 0:
        raise DegenerateInputError(f"{label} group is empty in {year}", details={"year": year, "group": label})
    return float(np.average(cells["experienced_return"], weights=cells["population"]))


def group_gap(
    panel: pd.DataFrame,
    population: pd.DataFrame,
    year: int,
    old_min_age: int = 60,
    young_max_age: int = 39,
) -> float:
    """Population-weighted experienced return of the old minus that of the young."""
    if young_max_age >= old_min_age:
        raise ParameterError(f"young_max_age ({young_max_age}) must be below old_min_age ({old_min_age})")
    cells = _cohorts_at(panel, population, year)
    old = _weighted_mean(cells[cells["age"] >= old_min_age], "old", year)
    young = _weighted_mean(cells[cells["age"] <= young_max_age], "young", year)
    return old - young


def disagreement_std(panel: pd.DataFrame, population: pd.DataFrame, year: int) -> float:
    """Population-weighted standard deviation of experienced returns across living cohorts."""
    cells = _cohorts_at(panel, population, year)
    cells = cells[cells["population"] > 0]
    if len(cells) < 2:
        raise DegenerateInputError(
            f"need at least two cohorts with positive population in {year}, got {len(cells)}",
            details={"year": year},
        )
    weights = cells["population"].to_numpy(dtype=float)
    x = cells["experienced_return"].to_numpy(dtype=float)
    mean = np.average(x, weights=weights)
    return float(np.sqrt(np.average((x - mean) ** 2, weights=weights)))


def gap_series(
    panel: pd.DataFrame,
    population: pd.DataFrame,
    old_min_age: int = 60,
    young_max_age: int = 39,
) -> pd.DataFrame:
    """group_gap for every panel year where both groups exist."""
    rows = []
    for year in sorted(panel["year"].unique()):
        try:
            rows.append((int(year), group_gap(panel, population, int(year), old_min_age, young_max_age)))
        except DegenerateInputError:
            continue
    return pd.DataFrame(rows, columns=["year", "gap"])


def disagreement_series(panel: pd.DataFrame, population: pd.DataFrame) -> pd.DataFrame:
    rows = []
    for year in sorted(panel["year"].unique()):
        try:
            rows.append((int(year), disagreement_std(panel, population, int(year))))
        except DegenerateInputError:
            continue
    return pd.DataFrame(rows, columns=["year", "disagreement_std"])


def deflate_returns(nominal: pd.Series, cpi: pd.Series) -> pd.Series:
    """real_y = (1 + nominal_y) * CPI_{y-1} / CPI_y - 1; years without a prior CPI are dropped."""
    nominal = require_contiguous(nominal)
    cpi = require_contiguous(cpi, "cpi")
    if (cpi <= 0).any():
        raise ParameterError("CPI levels must be positive")
    growth = cpi / cpi.shift(1)
    real = ((1.0 + nominal) / growth.reindex(nominal.index) - 1.0).dropna()
    return real.rename("return")
