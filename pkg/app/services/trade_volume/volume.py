"""
Trade Volume
Turnover from position changes and from the dispersion of belief revisions

Two conventions for the cohorts at the edges of the trading window:

  entry_exit  the newborn enters from a zero position and the cohort leaving
              the market liquidates to zero (sum over n = t-q..t)
  interior    only the q cohorts trading at t; the newborn is measured
              against the per-capita supply of one unit and the exiting
              cohort is left out. Zero whenever dividends are constant.

Both are normalized by 1/q. The belief form reproduces the definition exactly
under either convention: a cohort holding nothing is assigned the belief that
implies a zero myopic position (average belief minus 1/chi).
"""
import logging
from typing import Dict, Union

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from app.core.exceptions import HistoryCoverageError, ParameterError
from app.core.validation import require_two_periods
from app.models.schemas.beliefs import DividendHistory
from app.models.schemas.economy import EconomyParams, PriceCoefficients
from app.models.schemas.trade_volume import TradeConvention, TradeVolumePoint
from app.services.beliefs.learners import ebl_belief
from app.services.beliefs.weights import weight_matrix
from app.services.equilibrium.demand import demand_table, recent_state, state_width

logger = logging.getLogger(__name__)


def _convention(include_entry_exit: bool) -> TradeConvention:
    return "entry_exit" if include_entry_exit else "interior"


def belief_sensitivity(params: EconomyParams, coeffs: PriceCoefficients) -> float:
    """chi = 1 / (gamma sigma^2 (1+beta0)): position change per unit of belief gap."""
    if coeffs.beta0 == -1.0:
        raise ParameterError("beta0 = -1 makes chi undefined")
    return 1.0 / (params.gamma * params.sigma ** 2 * (1.0 + coeffs.beta0))


def _holdings_by_age(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    history: DividendHistory,
    t: int,
) -> np.ndarray:
    table = demand_table(params, coeffs)
    return table @ recent_state(history, t, state_width(params, coeffs))


def trade_volume_definition(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    history: DividendHistory,
    t: int,
    include_entry_exit: bool = True,
) -> TradeVolumePoint:
    """
    TV_t = sqrt((1/q) * sum_n (x_t^n - x_{t-1}^n)^2)

    Args:
        params: Economy parameters
        coeffs: Price rule the demands are computed under
        history: Dividends covering t-L..t, L the demand state width
        t: Date of the trade
        include_entry_exit: Count entry from and exit to a zero position

    Returns:
        TradeVolumePoint keyed by birth date
    """
    q = params.q
    width = state_width(params, coeffs)
    history.require(t - width, t)

    now = _holdings_by_age(params, coeffs, history, t)
    before = _holdings_by_age(params, coeffs, history, t - 1)

    changes: Dict[int, float] = {}
    changes[t] = float(now[0] - (0.0 if include_entry_exit else 1.0))
    for age in range(1, q):
        changes[t - age] = float(now[age] - before[age - 1])
    if include_entry_exit:
        changes[t - q] = float(-before[q - 1])

    squares = np.square(np.fromiter(changes.values(), dtype=float))
    tv = float(np.sqrt(squares.sum() / q))
    return TradeVolumePoint(
        time=t,
        tv=tv,
        per_cohort_changes=changes,
        convention=_convention(include_entry_exit),
    )


def trade_volume_beliefs(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    history: DividendHistory,
    t: int,
    include_entry_exit: bool = True,
) -> float:
    """
    TV_t = chi * sqrt((1/q) * sum_n (r_n - mean revision)^2), r_n = theta_t^n - theta_{t-1}^n.

    The centring term is the revision of the average belief of trading cohorts,
    which is also the mean of r_n over the q+1 cohorts of the entry/exit sum.
    """
    q = params.q
    history.require(t - q, t)
    chi = belief_sensitivity(params, coeffs)
    sigma2 = params.sigma ** 2

    theta_now = np.array([ebl_belief(history, t - age, t, params.lam, sigma2).subjective_mean for age in range(q)])
    theta_before = np.array(
        [ebl_belief(history, t - 1 - age, t - 1, params.lam, sigma2).subjective_mean for age in range(q)]
    )
    avg_now, avg_before = theta_now.mean(), theta_before.mean()
    shift = avg_now - avg_before

    revisions = list(theta_now[1:] - theta_before[:-1])
    if include_entry_exit:
        revisions.append(theta_now[0] - (avg_before - 1.0 / chi))
        revisions.append((avg_now - 1.0 / chi) - theta_before[q - 1])
    else:
        revisions.append(theta_now[0] - avg_before)

    centred = np.asarray(revisions) - shift
    return float(chi * np.sqrt(np.square(centred).sum() / q))


def thought_experiment_tv(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    d_bar: float,
    d_t: float,
) -> float:
    """
    Turnover at the first date after a long run of d_bar:
    |d_t - d_bar| * chi * std over trading ages of w(0, lam, age).
    """
    chi = belief_sensitivity(params, coeffs)
    latest = weight_matrix(params.lam, params.q)[:, 0]
    dispersion = float(np.sqrt(max(np.mean(latest ** 2) - np.mean(latest) ** 2, 0.0)))
    return abs(d_t - d_bar) * chi * dispersion


def q2_closed_form_tv(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    d_prev: float,
    d_now: float,
) -> float:
    """Two trading periods: (1 - omega) |d_t - d_{t-1}| chi / 2."""
    require_two_periods(params, "the closed-form trade volume")
    chi = belief_sensitivity(params, coeffs)
    return (1.0 - params.omega) * abs(d_now - d_prev) * chi / 2.0


def holdings_panel(dividends: np.ndarray, table: np.ndarray) -> np.ndarray:
    """
    Positions by date and age for an affine demand table with L+1 lag columns.
    Row i belongs to the date of dividends[i + L].
    """
    width = table.shape[1] - 1
    # rows: [1, d_t, ..., d_{t-width+1}] for each t with a full window
    windows = sliding_window_view(np.asarray(dividends, dtype=float), width)[:, ::-1]
    states = np.column_stack((np.ones(len(windows)), windows))
    return states @ table.T


def turnover_from_panel(panel: np.ndarray, include_entry_exit: bool = False) -> np.ndarray:
    """TV for rows 1.. of a (dates x q) holdings panel."""
    q = panel.shape[1]
    now, before = panel[1:], panel[:-1]
    changes = [now[:, 1:] - before[:, :-1], (now[:, 0] - (0.0 if include_entry_exit else 1.0))[:, None]]
    if include_entry_exit:
        changes.append(-before[:, q - 1][:, None])
    return np.sqrt(np.square(np.hstack(changes)).sum(axis=1) / q)


def trade_volume_series(
    params: EconomyParams,
    coeffs: PriceCoefficients,
    dividends: Union[DividendHistory, np.ndarray],
    include_entry_exit: bool = False,
) -> pd.DataFrame:
    """
    Turnover at every date of a path that has a full demand state at t-1.

    Returns:
        DataFrame with columns time, tv, convention
    """
    if isinstance(dividends, DividendHistory):
        history = dividends
    else:
        history = DividendHistory.from_values(np.asarray(dividends, dtype=float))

    q = params.q
    width = state_width(params, coeffs)
    d = history.as_array()
    if len(d) < width + 1:
        raise HistoryCoverageError(
            f"need at least {width + 1} dividends for one trade volume, got {len(d)}",
            details={"required": width + 1, "available": len(d)},
        )

    panel = holdings_panel(d, demand_table(params, coeffs))
    tv = turnover_from_panel(panel, include_entry_exit)

    times = history.origin_time + width + np.arange(len(tv))
    logger.debug(f"Trade volume series: {len(tv)} dates, q={q}, convention={_convention(include_entry_exit)}")
    return pd.DataFrame({"time": times, "tv": tv, "convention": _convention(include_entry_exit)})
