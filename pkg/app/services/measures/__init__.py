"""
Measures
Experienced returns, old/young gaps, disagreement and turnover from user-supplied series
"""
from app.services.measures.experience import (
    require_contiguous,
    experienced_returns,
    group_gap,
    disagreement_std,
    gap_series,
    disagreement_series,
    deflate_returns,
)
from app.services.measures.turnover import detrend_turnover, moving_average
from app.services.measures.io import (
    read_table,
    load_returns,
    load_turnover,
    load_cpi,
    load_population,
    load_dividends,
)

__all__ = [
    "require_contiguous",
    "experienced_returns",
    "group_gap",
    "disagreement_std",
    "gap_series",
    "disagreement_series",
    "deflate_returns",
    "detrend_turnover",
    "moving_average",
    "read_table",
    "load_returns",
    "load_turnover",
    "load_cpi",
    "load_population",
    "load_dividends",
]
