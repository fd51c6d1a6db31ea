"""
Pydantic Schemas
All domain models shared by the services and the CLI
"""

# Belief schemas
from .beliefs import WeightVector, DividendHistory, LearnerSpec, Belief

# Economy and myopic equilibrium schemas
from .economy import (
    EconomyParams,
    AvgWeights,
    PriceCoefficients,
    PriceMoments,
    DemandProfile,
    BenchmarkSolution,
    ExcessPayoffRule,
    DemandSensitivity,
    PriceSolution,
)

# Trade volume schemas
from .trade_volume import TradeVolumePoint

# Demographics schemas
from .demographics import DemographicShock, ShockPricing, GrowthParams, GrowthPricing

# Non-myopic schemas
from .nonmyopic import (
    QuadraticExponential,
    AdjustedGaussianResult,
    DeltaTable,
    NonMyopicQ2Solution,
    SensitivityDecomposition,
    DemandDerivatives,
    GeneralSolution,
)

# Simulation schemas
from .simulation import SimConfig, SimPath, RegressionResult, EstimatedMoments

# Invariant suite schemas
from .checks import CheckResult, CheckReport

# Command-line configuration
from .run_config import RunConfig

__all__ = [
    # Beliefs
    "WeightVector",
    "DividendHistory",
    "LearnerSpec",
    "Belief",
    # Economy
    "EconomyParams",
    "AvgWeights",
    "PriceCoefficients",
    "PriceMoments",
    "DemandProfile",
    "BenchmarkSolution",
    "ExcessPayoffRule",
    "DemandSensitivity",
    "PriceSolution",
    # Trade volume
    "TradeVolumePoint",
    # Demographics
    "DemographicShock",
    "ShockPricing",
    "GrowthParams",
    "GrowthPricing",
    # Non-myopic
    "QuadraticExponential",
    "AdjustedGaussianResult",
    "DeltaTable",
    "NonMyopicQ2Solution",
    "SensitivityDecomposition",
    "DemandDerivatives",
    "GeneralSolution",
    # Simulation
    "SimConfig",
    "SimPath",
    "RegressionResult",
    "EstimatedMoments",
    # Checks
    "CheckResult",
    "CheckReport",
    # Configuration
    "RunConfig",
]
