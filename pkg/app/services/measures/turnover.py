"""
Turnover
Log-linear detrending and trailing moving averages
"""
import logging

import numpy as np
import pandas as pd
import statsmodels.api as sm

from app.core.exceptions import DegenerateInputError, ParameterError
from app.services.measures.experience import require_contiguous

logger = logging.getLogger(__name__)


def detrend_turnover(series: pd.Series) -> pd.DataFrame:
    """
    Residuals of OLS of log turnover on a constant and the year.

    The year enters centred on its mean; residuals are identical to the
    uncentred fit and the design stays well conditioned.

    Returns:
        DataFrame with columns year, turnover, log_turnover, detrended
    """
    series = series.sort_index()
    if (series <= 0).any():
        raise ParameterError("turnover must be positive to take logs")
    if len(series) < 2:
        raise DegenerateInputError(f"need at least two years to fit a trend, got {len(series)}")

    years = series.index.to_numpy(dtype=float)
    logs = np.log(series.to_numpy(dtype=float))
    design = sm.add_constant(years - years.mean(), has_constant="add")
    fit = sm.OLS(logs, design).fit(method="qr")

    logger.debug(f"Turnover trend: slope={fit.params[1]:.6g} per year over {len(series)} years")
    return pd.DataFrame(
        {
            "year": series.index.astype(int),
            "turnover": series.to_numpy(dtype=float),
            "log_turnover": logs,
            "detrended": logs - fit.fittedvalues,
        }
    )


def moving_average(series: pd.Series, lags: int) -> pd.Series:
    """Trailing mean of the current point and `lags` prior points; undefined points dropped."""
    if lags < 0:
        raise ParameterError(f"lags must be >= 0, got {lags}")
    series = require_contiguous(series, "turnover")
    return series.rolling(window=lags + 1).mean().dropna()
