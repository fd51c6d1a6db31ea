"""
Closed-Form Properties
Experience weights, myopic prices, trade volume and demographics
"""
import numpy as np

from app.models.schemas.beliefs import DividendHistory, LearnerSpec
from app.models.schemas.demographics import DemographicShock, GrowthParams
from app.models.schemas.economy import EconomyParams
from app.services.beliefs.learners import ble_posterior, ebl_belief
from app.services.beliefs.weights import (
    experience_weights,
    first_difference_sign,
    is_first_order_dominated,
    weight_difference_sign_changes,
)
from app.services.demographics.growth import solve_growth_pricing
from app.services.demographics.shock import shock_clearing_residuals, solve_shock_pricing
from app.services.equilibrium.demand import cohort_demands, holding_gap
from app.services.equilibrium.myopic import recursion_residuals, solve_myopic_prices, toy_price_coefficients
from app.services.trade_volume.volume import (
    q2_closed_form_tv,
    trade_volume_beliefs,
    trade_volume_definition,
    trade_volume_series,
)
from app.services.checks.registry import CheckContext, Outcome, register, violations, within

LOADING_GRID = [
    (q, R, lam)
    for q in (2, 3, 5, 10)
    for R in (1.02, 1.1, 1.5)
    for lam in (0.5, 1.0, 3.0)
]

# q=2 values at R=1.1, gamma=sigma=1, lambda=0
TOY_BETA0 = 7.962963
TOY_BETA1 = 2.037037
TOY_ALPHA = -803.347


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(b))


# ============================================================================
# BELIEFS
# ============================================================================

@register("weights_normalized", "beliefs")
def weights_normalized(ctx: CheckContext) -> Outcome:
    lams = np.linspace(-5.0, 5.0, ctx.size(21, 5))
    worst = max(
        abs(experience_weights(float(lam), age).sum() - 1.0)
        for lam in lams
        for age in range(ctx.size(61, 21))
    )
    return within(worst, 1e-12, "weights sum to one")


@register("single_crossing", "beliefs")
def single_crossing(ctx: CheckContext) -> Outcome:
    max_age = ctx.size(60, 20)
    bad = total = 0
    for lam in (0.25, 1.0, 3.0):
        for age in range(1, max_age + 1):
            for age_prime in range(age):
                total += 1
                crossings = weight_difference_sign_changes(lam, age, age_prime)
                if crossings != 1 or first_difference_sign(lam, age, age_prime) >= 0:
                    bad += 1
    return violations(bad, total, "older-minus-younger weight differences crossing once from below")


@register("first_order_dominance", "beliefs")
def first_order_dominance(ctx: CheckContext) -> Outcome:
    max_age = ctx.size(60, 20)
    bad = total = 0
    for lam in (0.25, 1.0, 3.0):
        for age in range(1, max_age + 1):
            for age_prime in range(age):
                total += 1
                bad += not is_first_order_dominated(lam, age, age_prime)
    return violations(bad, total, "cumulative weight orderings")


@register("recency_limit_weights", "beliefs")
def recency_limit_weights(ctx: CheckContext) -> Outcome:
    """Indicator of the newest observation: lambda=60 up to age 2, lambda=300 up to age 10."""
    worst = 0.0
    for lam, ages in ((60.0, range(3)), (300.0, range(11))):
        for age in ages:
            indicator = np.zeros(age + 1)
            indicator[0] = 1.0
            worst = max(worst, float(np.max(np.abs(experience_weights(lam, age) - indicator))))
    return within(worst, 1e-9, "distance to the indicator weights")


@register("ble_matches_ebl", "beliefs")
def ble_matches_ebl(ctx: CheckContext) -> Outcome:
    rng = ctx.rng()
    spec = LearnerSpec(kind="BLE", dividend_var=1.0, prior_var=None)
    worst = 0.0
    for _ in range(ctx.size(500, 50)):
        length = int(rng.integers(1, 40))
        history = DividendHistory.from_values(rng.normal(1.0, 1.0, length))
        birth = int(rng.integers(0, length))
        now = history.end_time
        ble = ble_posterior(history, birth, now, spec).subjective_mean
        ebl = ebl_belief(history, birth, now, 0.0).subjective_mean
        worst = max(worst, abs(ble - ebl))
    return within(worst, 1e-9, "diffuse Bayesian minus equal-weight experience mean")


# ============================================================================
# MYOPIC EQUILIBRIUM
# ============================================================================

@register("toy_oracle", "equilibrium")
def toy_oracle(ctx: CheckContext) -> Outcome:
    worst = 0.0
    for lam in (0.0, 0.5, 1.0, 3.0, 5.0):
        params = EconomyParams(q=2, R=1.1, lam=lam)
        general, toy = solve_myopic_prices(params), toy_price_coefficients(params)
        worst = max(worst, _relative(general.alpha, toy.alpha))
        worst = max(worst, *(_relative(g, t) for g, t in zip(general.betas, toy.betas)))

    base = solve_myopic_prices(EconomyParams(q=2, R=1.1, lam=0.0))
    spot_ok = (
        abs(base.betas[0] - TOY_BETA0) <= 1e-6
        and abs(base.betas[1] - TOY_BETA1) <= 1e-6
        and abs(base.alpha - TOY_ALPHA) <= 1e-3
    )
    outcome = within(worst, 1e-12, "general solver against the two-period closed forms")
    outcome.passed = outcome.passed and spot_ok
    outcome.detail += f"; spot values beta0={base.betas[0]:.7f} beta1={base.betas[1]:.7f} alpha={base.alpha:.4f}"
    return outcome


@register("monotone_loadings", "equilibrium")
def monotone_loadings(ctx: CheckContext) -> Outcome:
    bad = 0
    for q, R, lam in LOADING_GRID:
        betas = np.asarray(solve_myopic_prices(EconomyParams(q=q, R=R, lam=lam)).betas)
        if not (betas[-1] > 0 and np.all(np.diff(betas) < 0)):
            bad += 1
    return violations(bad, len(LOADING_GRID), "positive strictly decreasing loading profiles")


@register("recursion_identities", "equilibrium")
def recursion_identities(ctx: CheckContext) -> Outcome:
    worst = 0.0
    for q, R, lam in LOADING_GRID:
        params = EconomyParams(q=q, R=R, lam=lam)
        coeffs = solve_myopic_prices(params)
        worst = max(worst, float(np.max(np.abs(recursion_residuals(params, coeffs)))) / (1.0 + coeffs.beta0))
    return within(worst, 1e-12, "R beta_k = (1+beta0) w_k + beta_k+1")


@register("beta0_increasing_in_lambda", "equilibrium")
def beta0_increasing_in_lambda(ctx: CheckContext) -> Outcome:
    lams = (0.0, 0.5, 1.0, 2.0, 3.0, 5.0)
    bad = total = 0
    for q in (2, 3, 5, 10):
        for R in (1.02, 1.1, 1.5):
            total += 1
            beta0 = [solve_myopic_prices(EconomyParams(q=q, R=R, lam=lam)).beta0 for lam in lams]
            bad += not np.all(np.diff(beta0) > 0)
    return violations(bad, total, "beta0 paths increasing in lambda")


@register("rate_comparative_statics", "equilibrium")
def rate_comparative_statics(ctx: CheckContext) -> Outcome:
    """Finite differences in R: every loading falls and the intercept rises."""
    step = 1e-5
    bad = 0
    for q, R, lam in LOADING_GRID:
        low = solve_myopic_prices(EconomyParams(q=q, R=R, lam=lam))
        high = solve_myopic_prices(EconomyParams(q=q, R=R + step, lam=lam))
        if not (np.all(np.asarray(high.betas) < np.asarray(low.betas)) and high.alpha > low.alpha):
            bad += 1
    return violations(bad, len(LOADING_GRID), "rate comparative statics")


@register("recency_limit_prices", "equilibrium")
def recency_limit_prices(ctx: CheckContext) -> Outcome:
    """
    lambda=60, q=2: beta0 within 1e-6 of 1/(R-1), beta1 below 1e-6. Evaluating
    the price rule with indicator weights gives 1/(R-1), which differs from the
    1/(R^q - 1) form sometimes quoted for this limit.
    """
    R = 1.1
    coeffs = solve_myopic_prices(EconomyParams(q=2, R=R, lam=60.0))
    gap = abs(coeffs.betas[0] - 1.0 / (R - 1.0))
    ok = gap <= 1e-6 and abs(coeffs.betas[1]) < 1e-6
    return Outcome(
        passed=ok,
        detail=(
            f"beta0={coeffs.betas[0]:.10f} vs 1/(R-1)={1.0 / (R - 1.0):.10f}, beta1={coeffs.betas[1]:.3e}; "
            f"1/(R^q-1)={1.0 / (R ** 2 - 1.0):.6f} is not the limit of the price rule"
        ),
        metrics={"beta0_gap": gap, "beta1": coeffs.betas[1]},
    )


@register("market_clearing", "equilibrium")
def market_clearing(ctx: CheckContext) -> Outcome:
    rng = ctx.rng()
    worst = 0.0
    for q in (2, 3, 5):
        for lam in (0.0, 1.0, 3.0):
            params = EconomyParams(q=q, R=1.1, lam=lam)
            coeffs = solve_myopic_prices(params)
            for _ in range(ctx.size(50, 10)):
                history = DividendHistory.from_values(rng.normal(1.0, 1.0, q + 2))
                mean = cohort_demands(params, coeffs, history, history.end_time).mean_holding
                worst = max(worst, abs(mean - 1.0))
    return within(worst, 1e-10, "average holding of trading cohorts minus one")


@register("boom_bust_tilt", "equilibrium")
def boom_bust_tilt(ctx: CheckContext) -> Outcome:
    """
    After dividends that only rose, older cohorts hold less than younger ones;
    after dividends that only fell, they hold more.
    """
    rng = ctx.rng()
    bad = total = 0
    for _ in range(ctx.size(1000, 100)):
        q = int(rng.integers(2, 7))
        lam = float(rng.choice([0.5, 1.0, 3.0]))
        direction = float(rng.choice([1.0, -1.0]))
        params = EconomyParams(q=q, R=1.1, lam=lam)
        coeffs = solve_myopic_prices(params)
        path = 1.0 + direction * np.cumsum(np.abs(rng.normal(0.0, 1.0, q)))
        history = DividendHistory.from_values(path)
        t = history.end_time
        for n in range(t - q + 1, t + 1):
            for k in range(1, t - n + 1):
                total += 1
                xi = holding_gap(params, coeffs, history, n, k, t)
                bad += direction * xi > 1e-12
    return violations(bad, total, "cohort pairs with the predicted holding gap sign")


# ============================================================================
# TRADE VOLUME
# ============================================================================

@register("trade_volume_forms_agree", "trade_volume")
def trade_volume_forms_agree(ctx: CheckContext) -> Outcome:
    rng = ctx.rng()
    worst = 0.0
    cases = ctx.size(10_000, 200)
    for i in range(cases):
        q = (2, 4)[i % 2]
        lam = float(rng.choice([0.0, 0.5, 1.0, 3.0]))
        params = EconomyParams(q=q, R=float(rng.choice([1.02, 1.1, 1.5])), lam=lam)
        coeffs = solve_myopic_prices(params)
        history = DividendHistory.from_values(rng.normal(1.0, 1.0, q + 1))
        t = history.end_time
        for entry_exit in (True, False):
            definition = trade_volume_definition(params, coeffs, history, t, entry_exit).tv
            beliefs = trade_volume_beliefs(params, coeffs, history, t, entry_exit)
            worst = max(worst, abs(definition - beliefs))
    return within(worst, 1e-10, "position-change form minus belief-revision form")


@register("trade_volume_shift_invariant", "trade_volume")
def trade_volume_shift_invariant(ctx: CheckContext) -> Outcome:
    rng = ctx.rng()
    worst, negative = 0.0, 0
    for q in (2, 3, 5):
        for lam in (0.0, 1.0, 3.0):
            params = EconomyParams(q=q, R=1.1, lam=lam)
            coeffs = solve_myopic_prices(params)
            path = rng.normal(1.0, 1.0, ctx.size(200, 40))
            for entry_exit in (True, False):
                base = trade_volume_series(params, coeffs, path, entry_exit)["tv"].to_numpy()
                shifted = trade_volume_series(params, coeffs, path + 3.5, entry_exit)["tv"].to_numpy()
                worst = max(worst, float(np.max(np.abs(base - shifted))))
                negative += int(np.sum(base < 0))
    outcome = within(worst, 1e-10, "trade volume change under a constant dividend shift")
    outcome.passed = outcome.passed and negative == 0
    outcome.metrics["negative"] = float(negative)
    return outcome


@register("trade_volume_q2_closed_form", "trade_volume")
def trade_volume_q2_closed_form(ctx: CheckContext) -> Outcome:
    """After a steady dividend, one move: closed form against the definition."""
    rng = ctx.rng()
    worst = 0.0
    for lam in (0.0, 0.5, 1.0, 3.0, 5.0):
        params = EconomyParams(q=2, R=1.1, lam=lam)
        coeffs = solve_myopic_prices(params)
        for _ in range(ctx.size(50, 10)):
            d_prev, d_now = rng.normal(1.0, 1.0, 2)
            history = DividendHistory.from_values([d_prev, d_prev, d_now])
            definition = trade_volume_definition(params, coeffs, history, 2, include_entry_exit=False).tv
            worst = max(worst, abs(definition - q2_closed_form_tv(params, coeffs, d_prev, d_now)))
    return within(worst, 1e-12, "closed form minus definition")


@register("trade_volume_falls_with_recency", "trade_volume")
def trade_volume_falls_with_recency(ctx: CheckContext) -> Outcome:
    volumes = []
    for lam in (0.0, 1.0, 3.0, 5.0):
        params = EconomyParams(q=2, R=1.1, lam=lam)
        volumes.append(q2_closed_form_tv(params, solve_myopic_prices(params), 0.0, 1.0))
    ok = bool(np.all(np.diff(volumes) < 0))
    return Outcome(
        passed=ok,
        detail="trade volume after a unit move at lambda 0, 1, 3, 5: " + ", ".join(f"{v:.6g}" for v in volumes),
        metrics={f"tv_lambda_{lam:g}": v for lam, v in zip((0, 1, 3, 5), volumes)},
    )


# ============================================================================
# DEMOGRAPHICS
# ============================================================================

@register("shock_continuity", "demographics")
def shock_continuity(ctx: CheckContext) -> Outcome:
    worst = 0.0
    for lam in (0.0, 1.0, 3.0):
        params = EconomyParams(q=2, R=1.1, lam=lam)
        for y in (0.25, 0.5, 1.0):
            pricing = solve_shock_pricing(params, DemographicShock(y=y, y_tau=y))
            a, b0, b1 = pricing.baseline()
            for shocked in (pricing.at_tau(), pricing.at_tau1()):
                worst = max(worst, *(_relative(s, base) for s, base in zip(shocked, (a, b0, b1))))
    return within(worst, 1e-12, "shock coefficients with y_tau = y against the baseline")


@register("shock_market_clearing", "demographics")
def shock_market_clearing(ctx: CheckContext) -> Outcome:
    rng = ctx.rng()
    worst = 0.0
    for _ in range(ctx.size(200, 20)):
        params = EconomyParams(q=2, R=float(rng.choice([1.05, 1.1, 1.5])), lam=float(rng.choice([0.0, 1.0, 3.0])))
        shock = DemographicShock(y=0.5, y_tau=float(rng.uniform(0.2, 1.5)))
        d_before, d_tau, d_after = rng.normal(1.0, 1.0, 3)
        worst = max(worst, *map(abs, shock_clearing_residuals(params, shock, d_before, d_tau, d_after)))
    return within(worst, 1e-10, "excess supply at tau and tau+1")


@register("shock_sweep_monotone", "demographics")
def shock_sweep_monotone(ctx: CheckContext) -> Outcome:
    params = EconomyParams(q=2, R=1.1, gamma=1.0, sigma=1.0, lam=3.0)
    sweep = np.linspace(0.25, 0.75, 11)
    pricing = [solve_shock_pricing(params, DemographicShock(y=0.5, y_tau=float(y))) for y in sweep]
    b0_tau = np.array([p.b0_tau for p in pricing])
    b1_tau1 = np.array([p.b1_tau1 for p in pricing])
    ok = bool(np.all(np.diff(b0_tau) > 0) and np.all(np.diff(b1_tau1) > 0))
    return Outcome(
        passed=ok,
        detail=(
            f"b0_tau {b0_tau[0]:.6g} -> {b0_tau[-1]:.6g}, b1_tau1 {b1_tau1[0]:.6g} -> {b1_tau1[-1]:.6g} "
            f"as y_tau goes {sweep[0]:g} -> {sweep[-1]:g}"
        ),
    )


@register("growth_continuity", "demographics")
def growth_continuity(ctx: CheckContext) -> Outcome:
    worst = 0.0
    for lam in (0.0, 1.0, 3.0):
        params = EconomyParams(q=2, R=1.1, lam=lam)
        toy = toy_price_coefficients(params)
        for y0 in (0.25, 0.5, 1.0):
            pricing = solve_growth_pricing(params, GrowthParams(g=0.0, y0=y0))
            worst = max(
                worst,
                _relative(pricing.alpha0, toy.alpha / (2.0 * y0)),
                _relative(pricing.beta0, toy.betas[0]),
                _relative(pricing.beta1, toy.betas[1]),
            )
    return within(worst, 1e-12, "zero-growth pricing against the baseline")


@register("growth_recent_reliance", "demographics")
def growth_recent_reliance(ctx: CheckContext) -> Outcome:
    params = EconomyParams(q=2, R=1.1, lam=3.0)
    shares = [solve_growth_pricing(params, GrowthParams(g=g)).recent_reliance for g in (0.0, 0.02, 0.1)]
    return Outcome(
        passed=bool(np.all(np.diff(shares) > 0)),
        detail="beta0/(beta0+beta1) at g = 0, 0.02, 0.1: " + ", ".join(f"{s:.8f}" for s in shares),
    )
