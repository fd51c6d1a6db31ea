"""
Beliefs
Experience weights and learners
"""
from app.services.beliefs.weights import (
    experience_weights,
    compute_weights,
    weight_matrix,
    cumulative_weights,
    weight_difference_sign_changes,
    first_difference_sign,
    is_first_order_dominated,
)
from app.services.beliefs.learners import ebl_belief, fbl_posterior, ble_posterior, belief_for

__all__ = [
    "experience_weights",
    "compute_weights",
    "weight_matrix",
    "cumulative_weights",
    "weight_difference_sign_changes",
    "first_difference_sign",
    "is_first_order_dominated",
    "ebl_belief",
    "fbl_posterior",
    "ble_posterior",
    "belief_for",
]
