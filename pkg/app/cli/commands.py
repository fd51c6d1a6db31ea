"""
Command Handlers
Each subcommand reads the sections of RunConfig it needs, calls the services,
writes its artifacts and prints a JSON report on stdout.

Handlers return the process exit code; exceptions are turned into exit codes
by the error-handling middleware around the dispatcher.
"""
import argparse
import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from app.core.config import settings
from app.core.exceptions import DataFileError, DegenerateInputError, HistoryCoverageError, ParameterError
from app.middleware.error_handler import EXIT_CHECKS_FAILED
from app.middleware.logging import log_command
from app.models.schemas import (
    DemographicShock,
    EconomyParams,
    GrowthParams,
    PriceCoefficients,
    PriceSolution,
    SimConfig,
    SimPath,
)
from app.models.schemas.beliefs import DividendHistory
from app.models.schemas.run_config import RunConfig
from app.services.checks import run_checks
from app.services.demographics import (
    growth_price_path,
    impulse_dividends,
    shock_clearing_residuals,
    shock_price_path,
    solve_growth_pricing,
    solve_shock_pricing,
)
from app.services.equilibrium import (
    average_weights,
    benchmark_known_mean,
    price_moments,
    solve_myopic_prices,
    state_width,
)
from app.services.measures import (
    deflate_returns,
    detrend_turnover,
    disagreement_series,
    experienced_returns,
    gap_series,
    load_cpi,
    load_dividends,
    load_population,
    load_returns,
    load_turnover,
    moving_average,
)
from app.services.nonmyopic import (
    decompose_sensitivity,
    demand_derivatives,
    demand_recursion,
    solve_nonmyopic_general,
    solve_nonmyopic_q2,
)
from app.services.simulator import (
    estimate_moments,
    gaussian_draws,
    make_generator,
    predictability_regression,
    simulate,
    simulate_batch,
)
from app.services.trade_volume import (
    belief_sensitivity,
    q2_closed_form_tv,
    thought_experiment_tv,
    trade_volume_beliefs,
    trade_volume_series,
)
from app.cli.output import emit, write_json, write_table

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, RunConfig], int]

SIMULATED_REGIMES = ("myopic", "nonmyopic_q2")


# ============================================================================
# HELPERS
# ============================================================================

def output_dir(config: RunConfig) -> Path:
    return Path(config.output_dir or settings.output_dir)


def load_solution(path: str) -> PriceSolution:
    """Saved solution.json; malformed documents raise DataFileError."""
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise DataFileError(f"solution file not found: {path}", details={"path": path}) from e
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise DataFileError(f"solution file is not valid JSON: {e}", details={"path": path}) from e
    return PriceSolution.model_validate(document)


def solution_document(solution: PriceSolution) -> Dict[str, Any]:
    return solution.model_dump(by_alias=True, exclude_none=True)


def demand_frame(matrix: np.ndarray, s2: Optional[np.ndarray] = None) -> pd.DataFrame:
    """Affine demand table by age: intercept and one column per dividend lag."""
    frame = pd.DataFrame({"age": np.arange(matrix.shape[0]), "intercept": matrix[:, 0]})
    for k in range(matrix.shape[1] - 1):
        frame["d_t" if k == 0 else f"d_t-{k}"] = matrix[:, k + 1]
    if s2 is not None:
        frame["s2"] = s2
    return frame


# ============================================================================
# EQUILIBRIUM
# ============================================================================

@log_command("solve-myopic")
def solve_myopic_command(args: argparse.Namespace, config: RunConfig) -> int:
    params = config.economy.to_params()
    coeffs = solve_myopic_prices(params)

    document = solution_document(PriceSolution.from_parts(params, coeffs))
    document["avg_weights"] = list(average_weights(params).w)
    document["moments"] = price_moments(coeffs, params.sigma).model_dump()
    # as lambda grows only the newest dividend matters and beta0 -> 1/(R-1)
    document["recency_limit"] = {
        "beta0": 1.0 / (params.R - 1.0),
        "beta0_gap": coeffs.beta0 - 1.0 / (params.R - 1.0),
    }

    write_json(output_dir(config) / "solution.json", document)
    emit(document)
    return 0


@log_command("solve-nonmyopic")
def solve_nonmyopic_command(args: argparse.Namespace, config: RunConfig) -> int:
    params = config.economy.to_params()
    myopic = solve_myopic_prices(params)
    out = output_dir(config)

    if params.q == 2:
        solution = solve_nonmyopic_q2(params)
        coeffs = solution.to_coefficients()
        document = solution_document(
            PriceSolution.from_parts(
                params,
                coeffs,
                regime="nonmyopic_q2",
                s2=solution.s2,
                l01=solution.l01,
                l11=solution.l11,
                solver=solution.solver_report(),
            )
        )
        document["method"] = solution.method
        document["derivatives"] = demand_derivatives(solution, params).model_dump()
        document["decomposition"] = decompose_sensitivity(solution, params).model_dump()
        table = demand_recursion(params, coeffs)
    else:
        general = solve_nonmyopic_general(params)
        coeffs, table = general.coefficients, general.table
        document = solution_document(
            PriceSolution.from_parts(
                params,
                coeffs,
                regime="nonmyopic",
                solver={"iterations": general.iterations, "residual": general.residual},
            )
        )
        document["method"] = general.method

    document["myopic_gap"] = {
        "alpha": coeffs.alpha - myopic.alpha,
        "betas": [b - m for b, m in zip(coeffs.betas, myopic.betas)],
    }

    trading = table.as_matrix()[: params.q]
    write_table(out, "demand_table", demand_frame(trading, np.asarray(table.s2)), config.format)
    write_json(out / "solution.json", document)
    emit(document)
    return 0


@log_command("benchmark")
def benchmark_command(args: argparse.Namespace, config: RunConfig) -> int:
    params = config.economy.to_params()
    benchmark = benchmark_known_mean(params)
    document = {
        "theta": params.theta,
        "R": params.R,
        "gamma": params.gamma,
        "sigma": params.sigma,
        **benchmark.model_dump(),
    }
    write_json(output_dir(config) / "benchmark.json", document)
    emit(document)
    return 0


# ============================================================================
# SIMULATION
# ============================================================================

def _path_summary(path: SimPath, max_lag: int, lags: int) -> Dict[str, Any]:
    summary: Dict[str, Any] = {
        "path_index": path.path_index,
        "mean_price": float(np.mean(path.prices)),
        "mean_tv": float(np.nanmean(path.tv)),
    }
    try:
        summary["moments"] = estimate_moments(path, max_lag).model_dump()
    except HistoryCoverageError as e:
        summary["moments"] = {"skipped": e.message}

    if path.T <= lags + 1:
        summary["predictability"] = {"skipped": f"{path.T} observations for {lags + 1} regressors"}
        return summary
    try:
        summary["predictability"] = predictability_regression(path, lags).model_dump()
    except (HistoryCoverageError, DegenerateInputError) as e:
        summary["predictability"] = {"skipped": e.message}
    return summary


@log_command("simulate")
def simulate_command(args: argparse.Namespace, config: RunConfig) -> int:
    section = config.simulation
    params: EconomyParams = config.economy.to_params()
    regime = section.regime
    coeffs: Optional[PriceCoefficients] = None

    if section.coefficients:
        saved = load_solution(section.coefficients)
        if saved.regime not in SIMULATED_REGIMES:
            raise ParameterError(
                f"cannot simulate a {saved.regime!r} solution; supported: {', '.join(SIMULATED_REGIMES)}",
                details={"regime": saved.regime},
            )
        params, regime, coeffs = saved.params(), saved.regime, saved.coefficients()

    max_lag = section.max_lag or params.q + 1
    lags = section.regression_lags or params.q + 2
    memory = max(params.q, lags, coeffs.n_lags if coeffs is not None else params.q)
    sim_config = SimConfig(
        seed=settings.default_seed if section.seed is None else section.seed,
        T=section.T,
        burn_in=section.burn_in or memory,
        params=params,
        regime=regime,
        dividend_std=section.dividend_std,
        include_entry_exit=section.include_entry_exit,
    )

    if section.n_paths == 1:
        paths: List[SimPath] = [simulate(sim_config, coeffs)]
    else:
        paths = simulate_batch(sim_config, section.n_paths, section.workers, coeffs)

    frames = []
    for path in paths:
        frame = path.to_frame()
        if section.n_paths > 1:
            frame.insert(0, "path_index", path.path_index)
        frames.append(frame)
    out = output_dir(config)
    write_table(out, "path", pd.concat(frames, ignore_index=True), config.format)

    used = paths[0].coefficients
    document = {
        "seed": sim_config.seed,
        "T": sim_config.T,
        "burn_in": sim_config.burn_in,
        "regime": regime,
        "n_paths": len(paths),
        "alpha": used.alpha,
        "betas": list(used.betas),
        "theory": price_moments(used, sim_config.shock_std, max_lag).model_dump(),
        "paths": [_path_summary(path, max_lag, lags) for path in paths],
    }
    write_json(out / "summary.json", document)
    emit(document)
    return 0


@log_command("trade-volume")
def trade_volume_command(args: argparse.Namespace, config: RunConfig) -> int:
    section = config.trade_volume
    params = config.economy.to_params()
    coeffs = solve_myopic_prices(params)

    if section.dividends:
        history = load_dividends(section.dividends)
    else:
        seed = settings.default_seed if section.seed is None else section.seed
        n = section.T + state_width(params, coeffs)
        history = DividendHistory.from_values(gaussian_draws(make_generator(seed), n, params.theta, params.sigma))

    frame = trade_volume_series(params, coeffs, history, section.include_entry_exit)
    frame["tv_beliefs"] = [
        trade_volume_beliefs(params, coeffs, history, int(t), section.include_entry_exit) for t in frame["time"]
    ]
    write_table(output_dir(config), "trade_volume", frame, config.format)

    d_t = section.d_bar + section.shock
    document: Dict[str, Any] = {
        "convention": "entry_exit" if section.include_entry_exit else "interior",
        "dates": len(frame),
        "chi": belief_sensitivity(params, coeffs),
        "mean_tv": float(frame["tv"].mean()),
        "max_form_gap": float((frame["tv"] - frame["tv_beliefs"]).abs().max()),
        "thought_experiment": {
            "d_bar": section.d_bar,
            "d_t": d_t,
            "tv": thought_experiment_tv(params, coeffs, section.d_bar, d_t),
        },
    }
    if params.q == 2:
        document["thought_experiment"]["closed_form_tv"] = q2_closed_form_tv(params, coeffs, section.d_bar, d_t)

    emit(document)
    return 0


# ============================================================================
# DEMOGRAPHICS
# ============================================================================

@log_command("demographics")
def demographics_command(args: argparse.Namespace, config: RunConfig) -> int:
    section = config.shock
    params = config.economy.to_params()
    out = output_dir(config)

    rows = []
    for y_tau in section.sweep:
        pricing = solve_shock_pricing(params, DemographicShock(tau=section.tau, y=section.y, y_tau=y_tau))
        rows.append({"y_tau": y_tau, **pricing.model_dump()})
    write_table(out, "shock_coefficients", pd.DataFrame(rows), config.format)

    shock = DemographicShock(tau=section.tau, y=section.y, y_tau=section.y_tau)
    history = impulse_dividends(params.theta, section.tau, section.k, section.dividend_shock)
    path = shock_price_path(params, shock, history)
    write_table(out, "shock_path", path, config.format)

    residual_tau, residual_tau1 = shock_clearing_residuals(
        params,
        shock,
        history.at(section.tau - 1),
        history.at(section.tau),
        history.at(section.tau + 1),
    )
    document = {
        "shock": shock.model_dump(),
        "pricing": solve_shock_pricing(params, shock).model_dump(),
        "clearing_residuals": {"tau": residual_tau, "tau_plus_1": residual_tau1},
        "sweep": rows,
    }
    emit(document)
    return 0


@log_command("growth")
def growth_command(args: argparse.Namespace, config: RunConfig) -> int:
    section = config.growth
    params = config.economy.to_params()
    out = output_dir(config)

    rows = []
    for g in section.sweep:
        pricing = solve_growth_pricing(params, GrowthParams(g=g, y0=section.y0))
        rows.append({**pricing.model_dump(), "recent_reliance": pricing.recent_reliance})
    write_table(out, "growth_coefficients", pd.DataFrame(rows), config.format)

    pricing = solve_growth_pricing(params, GrowthParams(g=section.g, y0=section.y0))
    history = DividendHistory.from_values(np.full(section.periods, params.theta))
    write_table(out, "growth_path", growth_price_path(pricing, history), config.format)

    document = {
        "pricing": {**pricing.model_dump(), "recent_reliance": pricing.recent_reliance},
        "sweep": rows,
    }
    emit(document)
    return 0


# ============================================================================
# EMPIRICAL MEASURES
# ============================================================================

@log_command("measures")
def measures_command(args: argparse.Namespace, config: RunConfig) -> int:
    section = config.measures
    if not section.returns or not section.population:
        raise ParameterError("measures needs both a returns and a population file")
    out = output_dir(config)

    returns = load_returns(section.returns)
    if section.cpi:
        returns = deflate_returns(returns, load_cpi(section.cpi))
    population = load_population(section.population)

    first = int(returns.index.min()) if section.first_cohort is None else section.first_cohort
    last = int(returns.index.max()) if section.last_cohort is None else section.last_cohort
    panel = experienced_returns(returns, section.lam, range(first, last + 1))
    gaps = gap_series(panel, population, section.old_min_age, section.young_max_age)
    disagreement = disagreement_series(panel, population)

    write_table(out, "experience_panel", panel, config.format)
    write_table(out, "gap", gaps, config.format)
    write_table(out, "disagreement", disagreement, config.format)

    document: Dict[str, Any] = {
        "lambda": section.lam,
        "real_returns": bool(section.cpi),
        "panel_cells": len(panel),
        "gap_years": len(gaps),
        "mean_gap": float(gaps["gap"].mean()) if len(gaps) else None,
        "disagreement_years": len(disagreement),
    }

    if section.turnover:
        detrended = detrend_turnover(load_turnover(section.turnover))
        smoothed = moving_average(pd.Series(detrended["detrended"].to_numpy(), index=detrended["year"]), section.ma_lags)
        detrended["moving_average"] = detrended["year"].map(smoothed)
        write_table(out, "detrended_turnover", detrended, config.format)
        document["turnover_years"] = len(detrended)

    emit(document)
    return 0


# ============================================================================
# INVARIANT SUITE
# ============================================================================

@log_command("check")
def check_command(args: argparse.Namespace, config: RunConfig) -> int:
    seed = settings.default_seed if getattr(args, "seed", None) is None else args.seed
    report = run_checks(quick=bool(getattr(args, "quick", False)), seed=seed)
    document = report.model_dump()
    write_json(output_dir(config) / "check_report.json", document)
    emit({"passed": report.passed, "failed": report.failed_names()})
    return 0 if report.passed else EXIT_CHECKS_FAILED


COMMANDS: Dict[str, Handler] = {
    "solve-myopic": solve_myopic_command,
    "solve-nonmyopic": solve_nonmyopic_command,
    "benchmark": benchmark_command,
    "simulate": simulate_command,
    "trade-volume": trade_volume_command,
    "demographics": demographics_command,
    "growth": growth_command,
    "measures": measures_command,
    "check": check_command,
}
