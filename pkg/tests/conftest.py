"""
Shared fixtures: a small reference economy, dividend paths and measure tables
"""
import numpy as np
import pandas as pd
import pytest

from app.models.schemas.beliefs import DividendHistory
from app.models.schemas.economy import EconomyParams
from app.services.equilibrium import solve_myopic_prices


@pytest.fixture
def toy_params() -> EconomyParams:
    """Two trading periods, R=1.1, equal weights."""
    return EconomyParams(q=2, R=1.1, gamma=1.0, sigma=1.0, theta=1.0, lam=0.0)


@pytest.fixture
def toy_coeffs(toy_params):
    return solve_myopic_prices(toy_params)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)


@pytest.fixture
def dividend_path(rng) -> DividendHistory:
    return DividendHistory.from_values(rng.normal(1.0, 1.0, 40))


@pytest.fixture
def uniform_population():
    def build(years, max_age: int = 74) -> pd.DataFrame:
        rows = [(y, y - age, 1.0) for y in years for age in range(max_age + 1)]
        return pd.DataFrame(rows, columns=["year", "birth_year", "population"])

    return build


@pytest.fixture
def output_dir(tmp_path):
    return tmp_path / "out"
