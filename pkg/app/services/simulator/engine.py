"""
Simulation Engine
Dividend paths and the equilibrium series they generate

Each path draws burn_in + T + 1 dividends starting at time 0; the first
burn_in dates fill the demand state and the last dividend realizes the
final excess return.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np

from app.core.config import settings
from app.core.exceptions import ParameterError
from app.models.schemas.economy import EconomyParams, PriceCoefficients
from app.models.schemas.simulation import Regime, SimConfig, SimPath
from app.services.equilibrium.demand import demand_table
from app.services.equilibrium.myopic import price_series, solve_myopic_prices
from app.services.nonmyopic.recursion import demand_recursion
from app.services.nonmyopic.solver import solve_nonmyopic_q2
from app.services.simulator.rng import gaussian_draws, make_generator
from app.services.trade_volume.volume import holdings_panel, turnover_from_panel

logger = logging.getLogger(__name__)


def solve_regime(params: EconomyParams, regime: Regime) -> PriceCoefficients:
    """Equilibrium price rule for the chosen agent type."""
    if regime == "myopic":
        return solve_myopic_prices(params)
    if regime == "nonmyopic_q2":
        return solve_nonmyopic_q2(params).to_coefficients()
    raise ParameterError(f"unknown regime {regime!r}")


def regime_demand_table(params: EconomyParams, coeffs: PriceCoefficients, regime: Regime) -> np.ndarray:
    """(q x L+2) affine demands of the trading ages."""
    if regime == "myopic":
        return demand_table(params, coeffs)
    return demand_recursion(params, coeffs).as_matrix()[: params.q]


def simulate(config: SimConfig, coefficients: Optional[PriceCoefficients] = None) -> SimPath:
    """
    One equilibrium path.

    Args:
        config: Path configuration (seed and path_index select the stream)
        coefficients: Price rule to reuse; solved for config.regime when omitted

    Returns:
        SimPath over times burn_in .. burn_in + T - 1
    """
    params = config.params
    coeffs = coefficients if coefficients is not None else solve_regime(params, config.regime)
    if coeffs.n_lags > config.burn_in:
        raise ParameterError(
            f"price rule with {coeffs.n_lags} lags needs burn_in >= {coeffs.n_lags}",
            details={"n_lags": coeffs.n_lags, "burn_in": config.burn_in},
        )

    generator = make_generator(config.seed, config.path_index)
    n = config.burn_in + config.T + 1
    dividends = gaussian_draws(generator, n, params.theta, config.shock_std)

    # prices[t] for t >= n_lags - 1
    prices = np.full(n, np.nan)
    prices[coeffs.n_lags - 1:] = price_series(coeffs, dividends)

    table = regime_demand_table(params, coeffs, config.regime)
    width = table.shape[1] - 1
    if width > config.burn_in:
        raise ParameterError(f"demand state of {width} lags needs burn_in >= {width}")
    panel = holdings_panel(dividends, table)
    holdings = np.full((n, params.q), np.nan)
    holdings[width - 1:] = panel
    tv = np.full(n, np.nan)
    tv[width:] = turnover_from_panel(panel, config.include_entry_exit)

    reported = slice(config.burn_in, config.burn_in + config.T)
    following = slice(config.burn_in + 1, config.burn_in + config.T + 1)
    payoffs = prices[following] + dividends[following] - params.R * prices[reported]
    rates = (prices[following] + dividends[following]) / prices[reported] - params.R

    return SimPath(
        params=params,
        coefficients=coeffs,
        regime=config.regime,
        times=np.arange(config.burn_in, config.burn_in + config.T),
        dividends=dividends[reported],
        prices=prices[reported],
        excess_returns=payoffs,
        excess_rates=rates,
        tv=tv[reported],
        holdings=holdings[reported],
        full_dividends=dividends,
        first_time=0,
        path_index=config.path_index,
    )


def simulate_batch(
    config: SimConfig,
    n_paths: int,
    max_workers: Optional[int] = None,
    coefficients: Optional[PriceCoefficients] = None,
) -> List[SimPath]:
    """
    n_paths independent paths with path indices config.path_index + i,
    returned in path-index order whatever order the workers finish in.
    """
    if n_paths < 1:
        raise ParameterError(f"n_paths must be >= 1, got {n_paths}")
    coeffs = coefficients if coefficients is not None else solve_regime(config.params, config.regime)
    configs = [config.model_copy(update={"path_index": config.path_index + i}) for i in range(n_paths)]
    workers = max_workers or settings.simulation_workers

    start = time.time()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        paths = list(pool.map(lambda c: simulate(c, coeffs), configs))

    logger.info(
        f"🎲 Simulated {n_paths} paths x {config.T} periods with {workers} workers "
        f"in {(time.time() - start) * 1000:.0f}ms"
    )
    return sorted(paths, key=lambda p: p.path_index)
