"""
Invariant suite: registry behaviour and the properties themselves
"""
import pytest

from app.services.checks import REGISTRY, CheckContext, Outcome, run_checks
from app.services.checks.registry import Check, register, violations, within

FAST_CHECKS = [
    "weights_normalized",
    "single_crossing",
    "first_order_dominance",
    "recency_limit_weights",
    "ble_matches_ebl",
    "toy_oracle",
    "monotone_loadings",
    "recursion_identities",
    "beta0_increasing_in_lambda",
    "rate_comparative_statics",
    "recency_limit_prices",
    "market_clearing",
    "trade_volume_shift_invariant",
    "trade_volume_q2_closed_form",
    "trade_volume_falls_with_recency",
    "shock_continuity",
    "shock_market_clearing",
    "shock_sweep_monotone",
    "growth_continuity",
    "growth_recent_reliance",
    "adjusted_gaussian_mass",
    "nonmyopic_q2_solution",
    "nonmyopic_recursion_clearing",
    "nonmyopic_recency_shapes",
    "experience_lifetime_mean",
    "measures_population_scaling",
    "measures_boom_bust_gap",
    "detrend_exact_trend",
]


class TestRegistry:

    def test_names_are_unique(self):
        names = [c.name for c in REGISTRY]
        assert len(names) == len(set(names))

    def test_every_module_covered(self):
        modules = {c.module for c in REGISTRY}
        assert modules == {"beliefs", "equilibrium", "trade_volume", "demographics", "nonmyopic", "simulator", "measures"}

    def test_duplicate_registration_rejected(self):
        with pytest.raises(ValueError):
            register("toy_oracle", "equilibrium")(lambda ctx: Outcome(passed=True))

    def test_exception_becomes_failure(self, monkeypatch):
        def broken(ctx: CheckContext) -> Outcome:
            raise RuntimeError("boom")

        monkeypatch.setattr("app.services.checks.registry.REGISTRY", [Check("broken", "beliefs", broken)])
        report = run_checks(quick=True)
        assert not report.passed
        assert report.failed_names() == ["broken"]
        assert "RuntimeError" in report.results[0].detail

    def test_substreams_do_not_depend_on_selection(self):
        a = CheckContext(quick=True, seed=9, index=4).rng().random(5)
        b = CheckContext(quick=True, seed=9, index=4).rng().random(5)
        assert (a == b).all()

    def test_outcome_helpers(self):
        assert violations(0, 10, "cases").passed
        assert not violations(1, 10, "cases").passed
        assert within(1e-13, 1e-12, "x").passed
        assert not within(float("nan"), 1e-12, "x").passed


@pytest.mark.parametrize("name", FAST_CHECKS)
def test_property_holds(name):
    report = run_checks(quick=True, names=[name])
    assert len(report.results) == 1
    result = report.results[0]
    assert result.passed, result.detail


@pytest.mark.slow
def test_full_suite_passes():
    report = run_checks(quick=False)
    assert report.passed, report.failed_names()
