"""Optimal filtering for a cavity coupled to a waveguide at two distant
points: delayed quadrature model, Euler-Maruyama simulation, delayed
covariance lattice, filter, brute-force oracles and Wigner evaluation."""

from .covariance import CovarianceLattice, gain, gain_core, propagate
from .errors import ConfigError, GiantCavityError, ModelError
from .filtering import (
    EstimateTrajectory,
    WhitenessStats,
    innovation_whiteness,
    run_filter,
)
from .model import (
    PhysicalParams,
    StateSpaceModel,
    build_model,
    complex_to_quadrature,
    coupling_from_gamma,
    gamma_from_coupling,
    markovian_limit,
)
from .montecarlo import EnsembleStats, ensemble_stats
from .oracle import (
    AugmentedEstimate,
    AugmentedModel,
    augmented_kalman,
    build_augmented,
    discrete_kalman_markov,
    riccati_markov,
    simulate_augmented,
)
from .sde import (
    FieldSeries,
    SimConfig,
    Trajectory,
    delay_steps,
    simulate,
    waveguide_field,
)
from .wigner import (
    CatParams,
    GridSpec,
    WignerGrid,
    cat_wigner,
    centered_grid,
    coherent_wigner,
    grid_integral,
    state_to_wigner_inputs,
)

__all__ = [
    "AugmentedEstimate",
    "AugmentedModel",
    "CatParams",
    "ConfigError",
    "CovarianceLattice",
    "EnsembleStats",
    "EstimateTrajectory",
    "FieldSeries",
    "GiantCavityError",
    "GridSpec",
    "ModelError",
    "PhysicalParams",
    "SimConfig",
    "StateSpaceModel",
    "Trajectory",
    "WhitenessStats",
    "WignerGrid",
    "augmented_kalman",
    "build_augmented",
    "build_model",
    "cat_wigner",
    "centered_grid",
    "coherent_wigner",
    "complex_to_quadrature",
    "coupling_from_gamma",
    "delay_steps",
    "discrete_kalman_markov",
    "ensemble_stats",
    "gain",
    "gain_core",
    "gamma_from_coupling",
    "grid_integral",
    "innovation_whiteness",
    "markovian_limit",
    "propagate",
    "riccati_markov",
    "run_filter",
    "simulate",
    "simulate_augmented",
    "state_to_wigner_inputs",
    "waveguide_field",
]

__version__ = "0.1.0"
