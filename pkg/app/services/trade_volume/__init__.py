"""
Trade Volume
Definition, belief-dispersion form, thought experiment and q=2 closed form
"""
from app.services.trade_volume.volume import (
    belief_sensitivity,
    trade_volume_definition,
    trade_volume_beliefs,
    thought_experiment_tv,
    q2_closed_form_tv,
    trade_volume_series,
    holdings_panel,
    turnover_from_panel,
)

__all__ = [
    "belief_sensitivity",
    "trade_volume_definition",
    "trade_volume_beliefs",
    "thought_experiment_tv",
    "q2_closed_form_tv",
    "trade_volume_series",
    "holdings_panel",
    "turnover_from_panel",
]
