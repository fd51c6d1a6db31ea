"""
Experience weights and the three learners
"""
import numpy as np
import pytest

from app.core.exceptions import HistoryCoverageError, ParameterError
from app.models.schemas.beliefs import DividendHistory, LearnerSpec
from app.services.beliefs import (
    belief_for,
    ble_posterior,
    compute_weights,
    cumulative_weights,
    ebl_belief,
    experience_weights,
    fbl_posterior,
    first_difference_sign,
    is_first_order_dominated,
    weight_difference_sign_changes,
    weight_matrix,
)


class TestExperienceWeights:

    def test_equal_weights_at_zero_lambda(self):
        np.testing.assert_allclose(experience_weights(0.0, 3), np.full(4, 0.25), atol=1e-15)

    def test_linear_tilt(self):
        # age 1, lambda 1: weights proportional to (2, 1)
        np.testing.assert_allclose(experience_weights(1.0, 1), [2 / 3, 1 / 3], rtol=1e-14)

    @pytest.mark.parametrize("lam", [-50.0, -3.0, 0.0, 0.5, 3.0, 200.0])
    def test_normalized(self, lam):
        for age in range(30):
            assert experience_weights(lam, age).sum() == pytest.approx(1.0, abs=1e-12)

    def test_large_lambda_stays_finite(self):
        w = experience_weights(1e4, 20)
        assert np.all(np.isfinite(w))
        assert w[0] == pytest.approx(1.0)

    def test_newborn_puts_everything_on_current_dividend(self):
        np.testing.assert_array_equal(experience_weights(2.5, 0), [1.0])

    def test_rejects_bad_inputs(self):
        with pytest.raises(ParameterError):
            experience_weights(float("nan"), 3)
        with pytest.raises(ParameterError):
            experience_weights(1.0, -1)

    def test_weight_matrix_rows(self):
        table = weight_matrix(1.0, 4)
        assert table.shape == (4, 4)
        np.testing.assert_allclose(table.sum(axis=1), 1.0, atol=1e-12)
        for age in range(4):
            assert np.all(table[age, age + 1:] == 0.0)
        assert not table.flags.writeable

    def test_cumulative_weights(self):
        w = compute_weights(0.0, 4)
        assert cumulative_weights(w, 1) == pytest.approx(0.4)
        assert cumulative_weights(w, 4) == pytest.approx(1.0)
        with pytest.raises(ParameterError):
            cumulative_weights(w, 5)


class TestCohortOrdering:

    @pytest.mark.parametrize("lam", [0.25, 1.0, 3.0])
    def test_single_crossing_from_below(self, lam):
        for age in range(1, 25):
            for age_prime in range(age):
                assert weight_difference_sign_changes(lam, age, age_prime) == 1
                assert first_difference_sign(lam, age, age_prime) < 0

    @pytest.mark.parametrize("lam", [0.25, 1.0, 3.0])
    def test_older_cohorts_are_dominated(self, lam):
        for age in range(1, 25):
            for age_prime in range(age):
                assert is_first_order_dominated(lam, age, age_prime)

    def test_age_order_enforced(self):
        with pytest.raises(ParameterError):
            weight_difference_sign_changes(1.0, 2, 2)


class TestLearners:

    def test_ebl_is_weighted_lifetime_average(self):
        history = DividendHistory.from_values([1.0, 2.0, 3.0])
        # born at 1, now 2: weights (2/3, 1/3) on (3, 2)
        belief = ebl_belief(history, 1, 2, 1.0, dividend_var=4.0)
        assert belief.subjective_mean == pytest.approx(8.0 / 3.0)
        assert belief.subjective_var == 4.0

    def test_ebl_needs_lifetime_coverage(self):
        history = DividendHistory.from_values([1.0, 2.0], origin_time=5)
        with pytest.raises(HistoryCoverageError):
            ebl_belief(history, 3, 6, 1.0)

    def test_ble_diffuse_matches_equal_weight_ebl(self, dividend_path):
        spec = LearnerSpec(kind="BLE", dividend_var=1.0)
        now = dividend_path.end_time
        for birth in (0, 10, now):
            ble = ble_posterior(dividend_path, birth, now, spec).subjective_mean
            ebl = ebl_belief(dividend_path, birth, now, 0.0).subjective_mean
            assert ble == pytest.approx(ebl, abs=1e-12)

    def test_fbl_uses_whole_history(self):
        history = DividendHistory.from_values([1.0, 2.0, 3.0, 6.0])
        spec = LearnerSpec(kind="FBL", dividend_var=2.0)
        belief = fbl_posterior(history, spec)
        assert belief.subjective_mean == pytest.approx(3.0)
        assert belief.subjective_var == pytest.approx(2.0 + 2.0 / 4)

    def test_fbl_with_prior_shrinks_toward_prior(self):
        history = DividendHistory.from_values([4.0, 4.0])
        spec = LearnerSpec(kind="FBL", dividend_var=1.0, prior_mean=0.0, prior_var=1.0)
        # prior precision 1, data precision 2
        assert fbl_posterior(history, spec).subjective_mean == pytest.approx(8.0 / 3.0)

    def test_fbl_requires_data_from_time_zero(self):
        history = DividendHistory.from_values([1.0, 2.0], origin_time=3)
        with pytest.raises(HistoryCoverageError):
            fbl_posterior(history, LearnerSpec(kind="FBL", dividend_var=1.0))

    def test_ebl_spec_requires_lambda(self):
        with pytest.raises(ValueError):
            LearnerSpec(kind="EBL", dividend_var=1.0)

    def test_dispatch(self, dividend_path):
        spec = LearnerSpec(kind="EBL", dividend_var=1.0, lam=1.5)
        now = dividend_path.end_time
        assert belief_for(spec, dividend_path, now - 5, now) == ebl_belief(dividend_path, now - 5, now, 1.5)
