"""Entanglement distribution from multimode Gaussian light to networks of optomechanical cavities."""
from .analysis import (
    DistributionRecord,
    TripartiteClassification,
    boundary_curve,
    classify_tripartite,
    distribution_point,
    one_vs_one,
    one_vs_two,
    optimal_s,
    purity_death_point,
    purity_region_scan,
    random_distribution_experiment,
    temperature_sweep,
    thermal_death_point,
)
from .dynamics import SiteParams, SpectralConfig, steady_state_mech_covariance
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    InstabilityError,
    MechnetError,
    PhysicsError,
    UnphysicalStateError,
)
from .resources import ThreeModeParams, TwoModeParams, three_mode_symmetric, tmsv

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConvergenceError", "DistributionRecord", "DomainError", "InstabilityError",
    "MechnetError", "PhysicsError", "SiteParams", "SpectralConfig", "ThreeModeParams",
    "TripartiteClassification", "TwoModeParams", "UnphysicalStateError", "boundary_curve",
    "classify_tripartite", "distribution_point", "one_vs_one", "one_vs_two", "optimal_s",
    "purity_death_point", "purity_region_scan", "random_distribution_experiment",
    "steady_state_mech_covariance", "temperature_sweep", "thermal_death_point", "three_mode_symmetric",
    "tmsv",
]
