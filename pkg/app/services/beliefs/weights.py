"""
Experience Weights
Recency-tilted weights over an agent's lifetime observations

An agent aged `age` has seen age+1 dividends; the one observed k periods ago gets
weight proportional to (age+1-k)^lambda. Weights are computed in log space so
very large |lambda| neither overflows nor loses normalization.
"""
import logging
import math
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from app.core.exceptions import ParameterError
from app.models.schemas.beliefs import WeightVector

logger = logging.getLogger(__name__)


def _check(lam: float, age: int) -> None:
    if not math.isfinite(lam):
        raise ParameterError(f"lambda must be finite, got {lam}")
    if age < 0:
        raise ParameterError(f"age must be >= 0, got {age}")


def experience_weights(lam: float, age: int) -> np.ndarray:
    """
    Raw weight array w(k, lam, age) for k = 0..age.

    Args:
        lam: Recency parameter (lam > 0 overweights recent observations)
        age: Periods lived so far

    Returns:
        Array of length age+1 summing to one
    """
    _check(lam, age)
    log_terms = lam * np.log(np.arange(age + 1, 0, -1, dtype=float))
    return np.exp(log_terms - logsumexp(log_terms))


def compute_weights(lam: float, age: int) -> WeightVector:
    return WeightVector(age=age, lam=lam, weights=tuple(experience_weights(lam, age)))


@lru_cache(maxsize=256)
def _weight_matrix(lam: float, q: int) -> np.ndarray:
    table = np.zeros((q, q))
    for age in range(q):
        table[age, : age + 1] = experience_weights(lam, age)
    table.setflags(write=False)
    return table


def weight_matrix(lam: float, q: int) -> np.ndarray:
    """
    (q x q) table: row = age, column = lag k, zero where k > age.
    Read-only; shared between callers.
    """
    _check(lam, 0)
    if q < 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    return _weight_matrix(float(lam), int(q))


def cumulative_weights(w: WeightVector, m: int) -> float:
    """F(m, age): total weight on the m+1 most recent observations."""
    if m < 0 or m > w.age:
        raise ParameterError(f"m must be in [0, {w.age}], got {m}")
    return float(np.sum(w.weights[: m + 1]))


def weight_difference_sign_changes(lam: float, age: int, age_prime: int) -> int:
    """
    Sign changes of w(., lam, age) - w(., lam, age_prime) over k = 0..age_prime+1,
    the younger agent's weights padded with zeros. Exact zeros are skipped.
    """
    if age_prime >= age:
        raise ParameterError(f"age_prime ({age_prime}) must be below age ({age})")
    older = experience_weights(lam, age)[: age_prime + 2]
    younger = np.zeros(age_prime + 2)
    younger[: age_prime + 1] = experience_weights(lam, age_prime)
    signs = np.sign(older - younger)
    signs = signs[signs != 0]
    return int(np.count_nonzero(np.diff(signs)))


def first_difference_sign(lam: float, age: int, age_prime: int) -> float:
    """Sign of w(0, lam, age) - w(0, lam, age_prime)."""
    return float(np.sign(experience_weights(lam, age)[0] - experience_weights(lam, age_prime)[0]))


def is_first_order_dominated(lam: float, age: int, age_prime: int, tol: float = 1e-12) -> bool:
    """True when F(m, age) <= F(m, age_prime) for every m <= age_prime."""
    older = np.cumsum(experience_weights(lam, age))[: age_prime + 1]
    younger = np.cumsum(experience_weights(lam, age_prime))
    return bool(np.all(older <= younger + tol))
