"""
Learners
Experience-based learning and the two Bayesian comparison learners

- EBL: recency-weighted average of lifetime dividends
- FBL: Bayes update on every observation since time 0
- BLE: Bayes update on lifetime observations only
"""
import logging
from typing import Optional

import numpy as np

from app.core.exceptions import HistoryCoverageError, ParameterError
from app.models.schemas.beliefs import Belief, DividendHistory, LearnerSpec
from app.services.beliefs.weights import experience_weights

logger = logging.getLogger(__name__)


def ebl_belief(history: DividendHistory, birth_time: int, now: int, lam: float, dividend_var: float = 1.0) -> Belief:
    """
    Subjective mean of an agent born at `birth_time`, evaluated at `now`.

    The subjective variance is the known dividend variance, passed through.
    """
    if birth_time > now:
        raise ParameterError(f"birth_time ({birth_time}) is after now ({now})")
    age = now - birth_time
    lifetime = history.recent(now, age + 1)
    mean = float(np.dot(experience_weights(lam, age), lifetime))
    return Belief(subjective_mean=mean, subjective_var=dividend_var)


def _bayes_update(observations: np.ndarray, spec: LearnerSpec) -> Belief:
    sigma2 = spec.dividend_var
    n = len(observations)

    if spec.diffuse:
        if n == 0:
            raise HistoryCoverageError("no observations and no prior")
        return Belief(
            subjective_mean=float(observations.mean()),
            subjective_var=sigma2 + sigma2 / n,
        )

    prior_precision = 1.0 / spec.prior_var
    data_precision = n / sigma2
    if n == 0:
        return Belief(subjective_mean=spec.prior_mean, subjective_var=sigma2 + spec.prior_var)

    posterior_precision = prior_precision + data_precision
    mean = (prior_precision * spec.prior_mean + data_precision * observations.mean()) / posterior_precision
    return Belief(subjective_mean=float(mean), subjective_var=sigma2 + 1.0 / posterior_precision)


def fbl_posterior(history: DividendHistory, spec: LearnerSpec, now: Optional[int] = None) -> Belief:
    """
    Full Bayesian learner: every dividend from time 0 through `now`.

    The data term uses the actual number of observations N.
    An empty window returns the prior.
    """
    if spec.kind != "FBL":
        raise ParameterError(f"expected an FBL learner, got {spec.kind}")
    if history.origin_time > 0:
        raise HistoryCoverageError(
            f"full-history learner needs data from time 0, history starts at {history.origin_time}"
        )
    now = history.end_time if now is None else now
    observations = history.window(0, now) if now >= 0 else np.empty(0)
    return _bayes_update(observations, spec)


def ble_posterior(history: DividendHistory, birth_time: int, now: int, spec: LearnerSpec) -> Belief:
    """Bayesian learner from experience: the age+1 lifetime observations only."""
    if spec.kind != "BLE":
        raise ParameterError(f"expected a BLE learner, got {spec.kind}")
    if birth_time > now:
        raise ParameterError(f"birth_time ({birth_time}) is after now ({now})")
    return _bayes_update(history.window(birth_time, now), spec)


def belief_for(spec: LearnerSpec, history: DividendHistory, birth_time: int, now: int) -> Belief:
    """Dispatch on learner kind."""
    if spec.kind == "EBL":
        return ebl_belief(history, birth_time, now, spec.lam, spec.dividend_var)
    if spec.kind == "BLE":
        return ble_posterior(history, birth_time, now, spec)
    return fbl_posterior(history, spec, now)
