"""
Vintage - Experience-Based Learning Asset Pricing
=================================================
Version: 1.0.0

Overlapping-generations economy whose agents learn from the dividends they
lived through: belief formation, myopic and non-myopic linear equilibria,
trade volume, demographic shocks, Monte Carlo simulation and the empirical
experience measures.
"""

__version__ = "1.0.0"
