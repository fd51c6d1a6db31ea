"""
Solver, Simulation and Measure Properties
Non-myopic equilibria, Monte Carlo paths and the empirical experience measures
"""
import numpy as np
import pandas as pd

from app.models.schemas.beliefs import DividendHistory
from app.models.schemas.economy import EconomyParams, PriceSolution
from app.models.schemas.simulation import SimConfig
from app.services.equilibrium.demand import holding_gap
from app.services.equilibrium.myopic import price_moments, solve_myopic_prices
from app.services.measures.experience import disagreement_std, experienced_returns, group_gap
from app.services.measures.turnover import detrend_turnover
from app.services.nonmyopic.brute_force import brute_force_gral_max, brute_force_young_demand
from app.services.nonmyopic.decomposition import decompose_sensitivity, demand_derivatives
from app.services.nonmyopic.gaussian import gral_max, tilted_density_mass
from app.services.nonmyopic.recursion import demand_recursion
from app.services.nonmyopic.solver import q2_conditions, solve_nonmyopic_q2
from app.services.simulator.engine import simulate
from app.services.simulator.statistics import estimate_moments, predictability_regression
from app.services.trade_volume.volume import trade_volume_beliefs
from app.services.checks.registry import CheckContext, Outcome, register, violations, within

NONMYOPIC_GRID = [(R, lam) for R in (1.05, 1.1, 1.5) for lam in (0.5, 1.0, 3.0)]
QUICK_NONMYOPIC_GRID = [(1.1, 1.0), (1.1, 3.0)]


def _nonmyopic_grid(ctx: CheckContext):
    return QUICK_NONMYOPIC_GRID if ctx.quick else NONMYOPIC_GRID


# ============================================================================
# NON-MYOPIC AGENTS
# ============================================================================

@register("adjusted_gaussian_mass", "nonmyopic")
def adjusted_gaussian_mass(ctx: CheckContext) -> Outcome:
    rng = ctx.rng()
    worst = 0.0
    for _ in range(ctx.size(100, 20)):
        A, B, mu = rng.normal(0.0, 1.0, 3)
        C = float(rng.uniform(0.0, 2.0))
        sigma2 = float(rng.uniform(0.2, 3.0))
        worst = max(worst, abs(tilted_density_mass(A, B, C, mu, sigma2) - 1.0))
    return within(worst, 1e-8, "mass of the tilted density")


@register("gral_max_brute_force", "nonmyopic")
def gral_max_brute_force(ctx: CheckContext) -> Outcome:
    rng = ctx.rng()
    worst = 0.0
    for _ in range(ctx.size(10, 3)):
        # keeps the optimal position well inside the default search grid
        A = float(rng.uniform(-0.5, 0.5))
        B = float(rng.normal(0.0, 0.3))
        C = float(rng.uniform(0.0, 0.5))
        mu, f = rng.normal(0.0, 0.5, 2)
        sigma2 = float(rng.uniform(0.5, 2.0))
        e, a = rng.uniform(1.0, 2.0, 2)
        _, value = gral_max(A, B, C, mu, sigma2, e, f, a)
        _, brute = brute_force_gral_max(A, B, C, mu, sigma2, e, f, a)
        worst = max(worst, abs(value - brute) / abs(brute))
    return within(worst, 1e-6, "closed-form maximum against quadrature and search")


@register("nonmyopic_q2_solution", "nonmyopic")
def nonmyopic_q2_solution(ctx: CheckContext) -> Outcome:
    """Market-clearing conditions, price signs and demand derivative signs."""
    worst, bad = 0.0, 0
    grid = _nonmyopic_grid(ctx)
    for R, lam in grid:
        params = EconomyParams(q=2, R=R, lam=lam)
        solution = solve_nonmyopic_q2(params)
        worst = max(
            worst,
            float(np.max(np.abs(q2_conditions(params, solution.alpha, solution.beta0, solution.beta1)))),
        )
        d = demand_derivatives(solution, params)
        split = decompose_sensitivity(solution, params)
        signs = (
            solution.alpha <= 0
            and 0 < solution.beta1 < R * solution.beta0
            and 1.0 + solution.beta0 + solution.beta1 - R * solution.beta0 > 0
            and d.young_d0 > 0 > d.old_d0
            and d.young_d1 < 0 < d.old_d1
            and split.beliefs_term >= 0
            and split.discount_term <= 0
            and split.total > 0
            and abs(split.beliefs_term + split.discount_term + split.dynamic_term - split.total) <= 1e-12 * max(1.0, abs(split.total))
        )
        bad += not signs
    outcome = within(worst, 1e-9, "two-period clearing conditions")
    outcome.passed = outcome.passed and bad == 0
    outcome.detail += f"; sign violations at {bad} of {len(grid)} parameter points"
    outcome.metrics["sign_violations"] = float(bad)
    return outcome


@register("nonmyopic_recursion_clearing", "nonmyopic")
def nonmyopic_recursion_clearing(ctx: CheckContext) -> Outcome:
    """Young loadings mirror the old cohort's: delta_k(0) = -l_k1 / (gamma (1+beta0)^2 sigma^2)."""
    worst = 0.0
    for R, lam in _nonmyopic_grid(ctx):
        params = EconomyParams(q=2, R=R, lam=lam)
        solution = solve_nonmyopic_q2(params)
        table = demand_recursion(params, solution.to_coefficients())
        scale = params.gamma * (1.0 + solution.beta0) ** 2 * params.sigma ** 2
        young = table.delta_k[0]
        worst = max(
            worst,
            abs(young[0] + solution.l01 / scale),
            abs(young[1] + solution.l11 / scale),
            float(np.max(np.abs(table.market_clearing_residuals()))),
        )
    return within(worst, 1e-9, "young demand loadings against the old cohort's")


@register("nonmyopic_recency_shapes", "nonmyopic")
def nonmyopic_recency_shapes(ctx: CheckContext) -> Outcome:
    lams = (0.5, 1.0, 3.0)
    solutions = [solve_nonmyopic_q2(EconomyParams(q=2, R=1.1, lam=lam)) for lam in lams]
    beta0 = np.array([s.beta0 for s in solutions])
    beta1 = np.array([s.beta1 for s in solutions])
    limit = solve_nonmyopic_q2(EconomyParams(q=2, R=1.1, lam=60.0))
    ok = bool(np.all(np.diff(beta0) > 0) and np.all(np.diff(beta1) < 0) and abs(limit.beta1) < 1e-8)
    return Outcome(
        passed=ok,
        detail=(
            "beta0 " + ", ".join(f"{b:.6g}" for b in beta0)
            + "; beta1 " + ", ".join(f"{b:.6g}" for b in beta1)
            + f"; beta1 at lambda=60: {limit.beta1:.3e}"
        ),
        metrics={"beta1_limit": limit.beta1},
    )


@register("brute_force_young_demand", "nonmyopic")
def brute_force_young_demand_check(ctx: CheckContext) -> Outcome:
    params = EconomyParams(q=2, R=1.1, lam=1.0)
    coeffs = solve_nonmyopic_q2(params).to_coefficients()
    row = demand_recursion(params, coeffs).as_matrix()[0]
    worst = 0.0
    for d_now, d_prev in ((1.0, 1.0), (1.5, 0.5))[: ctx.size(2, 1)]:
        reduced = float(row @ np.array([1.0, d_now, d_prev]))
        worst = max(worst, abs(reduced - brute_force_young_demand(params, coeffs, d_now, d_prev)))
    return within(worst, 1e-4, "age-0 demand from the recursion against the two-period program")


# ============================================================================
# SIMULATION
# ============================================================================

@register("simulated_moments", "simulator")
def simulated_moments(ctx: CheckContext) -> Outcome:
    params = EconomyParams(q=2, R=1.1, lam=0.0)
    path = simulate(SimConfig(seed=ctx.seed, T=ctx.size(100_000, 20_000), burn_in=10, params=params))
    estimated = estimate_moments(path, max_lag=2)
    theory = price_moments(path.coefficients, params.sigma, max_lag=2)

    z = np.array([
        (estimated.variance - theory.variance) / estimated.variance_se,
        (estimated.autocov[0] - theory.autocov_at(1)) / estimated.autocov_se[0],
        (estimated.autocov[1] - theory.autocov_at(2)) / estimated.autocov_se[1],
    ])
    return Outcome(
        passed=bool(np.all(np.abs(z) < 3.0)),
        detail=(
            f"variance {estimated.variance:.4f} vs {theory.variance:.4f}, "
            f"lag-1 {estimated.autocov[0]:.4f} vs {theory.autocov_at(1):.4f}, "
            f"lag-2 {estimated.autocov[1]:.4f} vs 0"
        ),
        metrics={"z_variance": z[0], "z_lag1": z[1], "z_lag2": z[2]},
    )


@register("predictability_cutoff", "simulator")
def predictability_cutoff(ctx: CheckContext) -> Outcome:
    params = EconomyParams(q=2, R=1.1, lam=0.0)
    lags = params.q + 2
    path = simulate(SimConfig(seed=ctx.seed, T=ctx.size(100_000, 20_000), burn_in=lags, params=params))
    fit = predictability_regression(path, lags)
    t_values = np.abs(np.asarray(fit.t_values[1:]))
    ok = bool(np.all(t_values[params.q:] < 3.0) and np.any(t_values[: params.q] > 3.0))
    return Outcome(
        passed=ok,
        detail="t-values " + ", ".join(f"{n}={t:.2f}" for n, t in zip(fit.names[1:], fit.t_values[1:])),
        metrics={n: t for n, t in zip(fit.names, fit.t_values)},
    )


@register("path_reconstruction", "simulator")
def path_reconstruction(ctx: CheckContext) -> Outcome:
    """Prices follow the rule and average holdings are one on every simulated date."""
    worst = 0.0
    for regime, lam in (("myopic", 0.0), ("myopic", 3.0), ("nonmyopic_q2", 1.0)):
        params = EconomyParams(q=2 if regime == "nonmyopic_q2" else 3, R=1.1, lam=lam)
        path = simulate(
            SimConfig(seed=ctx.seed, T=ctx.size(2000, 300), burn_in=5, params=params, regime=regime)
        )
        coeffs = path.coefficients
        rebuilt = coeffs.alpha + path.lagged_dividends(coeffs.n_lags) @ np.asarray(coeffs.betas)
        price_error = float(np.max(np.abs(rebuilt - path.prices))) / max(1.0, abs(coeffs.alpha))
        clearing_error = float(np.max(np.abs(path.holdings.mean(axis=1) - 1.0)))
        worst = max(worst, price_error, clearing_error)
    return within(worst, 1e-10, "price rule and market clearing along paths")


@register("path_boom_bust", "simulator")
def path_boom_bust(ctx: CheckContext) -> Outcome:
    params = EconomyParams(q=3, R=1.1, lam=1.0)
    path = simulate(SimConfig(seed=ctx.seed, T=ctx.size(3000, 300), burn_in=3, params=params))
    history = DividendHistory.from_values(path.full_dividends)
    d = path.full_dividends
    bad = total = 0
    for t in path.times:
        window = d[t - params.q + 1: t + 1]
        if not np.all(np.diff(window) >= 0):
            continue
        for n in range(t - params.q + 1, t + 1):
            for k in range(1, t - n + 1):
                total += 1
                bad += holding_gap(params, path.coefficients, history, n, k, int(t)) > 1e-12
    return violations(bad, total, "cohort pairs in rising windows holding less when older")


@register("path_trade_volume_forms", "simulator")
def path_trade_volume_forms(ctx: CheckContext) -> Outcome:
    worst = 0.0
    for entry_exit in (False, True):
        params = EconomyParams(q=3, R=1.1, lam=1.0)
        path = simulate(
            SimConfig(seed=ctx.seed, T=ctx.size(200, 50), burn_in=3, params=params, include_entry_exit=entry_exit)
        )
        history = DividendHistory.from_values(path.full_dividends)
        for i, t in enumerate(path.times):
            beliefs = trade_volume_beliefs(params, path.coefficients, history, int(t), entry_exit)
            worst = max(worst, abs(path.tv[i] - beliefs))
    return within(worst, 1e-10, "simulated trade volume against the belief form")


@register("solution_round_trip", "simulator")
def solution_round_trip(ctx: CheckContext) -> Outcome:
    params = EconomyParams(q=3, R=1.1, lam=1.0)
    coeffs = solve_myopic_prices(params)
    reloaded = PriceSolution.model_validate_json(PriceSolution.from_parts(params, coeffs).model_dump_json(by_alias=True))
    config = SimConfig(seed=ctx.seed, T=ctx.size(500, 50), burn_in=3, params=params)
    original = simulate(config, coeffs).to_frame()
    again = simulate(config.model_copy(update={"params": reloaded.params()}), reloaded.coefficients()).to_frame()
    same = original.equals(again)
    return Outcome(passed=same, detail="identical paths" if same else "paths differ after reloading the solution")


# ============================================================================
# EMPIRICAL MEASURES
# ============================================================================

def _uniform_population(years: range, max_age: int = 74) -> pd.DataFrame:
    rows = [(y, y - age, 1.0) for y in years for age in range(max_age + 1)]
    return pd.DataFrame(rows, columns=["year", "birth_year", "population"])


@register("experience_lifetime_mean", "measures")
def experience_lifetime_mean(ctx: CheckContext) -> Outcome:
    rng = ctx.rng()
    returns = pd.Series(rng.normal(0.05, 0.2, 60), index=range(1950, 2010))
    panel = experienced_returns(returns, 0.0, range(1950, 2010))
    worst = 0.0
    for year, birth, value in panel.itertuples(index=False):
        worst = max(worst, abs(value - returns.loc[birth:year].mean()))
    return within(worst, 1e-12, "equal-weight experience against the lifetime mean")


@register("measures_population_scaling", "measures")
def measures_population_scaling(ctx: CheckContext) -> Outcome:
    rng = ctx.rng()
    returns = pd.Series(rng.normal(0.05, 0.2, 150), index=range(1850, 2000))
    panel = experienced_returns(returns, 1.0, range(1850, 2000), years=range(1960, 2000))
    population = _uniform_population(range(1960, 2000))
    population["population"] = rng.uniform(0.5, 2.0, len(population))
    scaled = population.assign(population=population["population"] * 3.7)
    worst = 0.0
    for year in range(1960, 2000):
        worst = max(
            worst,
            abs(group_gap(panel, population, year) - group_gap(panel, scaled, year)),
            abs(disagreement_std(panel, population, year) - disagreement_std(panel, scaled, year)),
        )
    return within(worst, 1e-12, "gap and disagreement under population scaling")


@register("measures_boom_bust_gap", "measures")
def measures_boom_bust_gap(ctx: CheckContext) -> Outcome:
    """Young cohorts lead the old after a boom and trail them after the bust that follows."""
    returns = pd.Series(
        np.concatenate((np.zeros(100), np.full(30, 0.3), np.full(30, -0.3))),
        index=range(1800, 1960),
    )
    panel = experienced_returns(returns, 1.0, range(1800, 1960), years=[1929, 1959])
    population = _uniform_population(range(1929, 1960, 30))
    after_boom = group_gap(panel, population, 1929)
    after_bust = group_gap(panel, population, 1959)
    return Outcome(
        passed=after_boom < 0 < after_bust,
        detail=f"old-minus-young gap {after_boom:.4f} after the boom, {after_bust:.4f} after the bust",
        metrics={"gap_after_boom": after_boom, "gap_after_bust": after_bust},
    )


@register("detrend_exact_trend", "measures")
def detrend_exact_trend(ctx: CheckContext) -> Outcome:
    years = np.arange(1950, 2011)
    series = pd.Series(np.exp(0.5 + 0.03 * (years - 1950)), index=years)
    residuals = detrend_turnover(series)["detrended"].to_numpy()
    return within(float(np.max(np.abs(residuals))), 1e-12, "residuals of an exact log-linear trend")
