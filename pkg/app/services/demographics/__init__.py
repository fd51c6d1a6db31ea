"""
Demographics
Cohort-size shocks and population growth at q=2
"""
from app.services.demographics.shock import (
    solve_shock_pricing,
    shock_clearing_residuals,
    impulse_dividends,
    shock_price_path,
)
from app.services.demographics.growth import solve_growth_pricing, growth_price_path

__all__ = [
    "solve_shock_pricing",
    "shock_clearing_residuals",
    "impulse_dividends",
    "shock_price_path",
    "solve_growth_pricing",
    "growth_price_path",
]
