"""Zero-temperature Ohmic spin-boson dynamics via a polaron-type transformation."""
from .dynamics import (
    BlochTrajectory,
    QuadratureConfig,
    bloch_trajectory,
    markov_trajectory,
    residue_sigma_z,
    sigma_x_of_t,
    sigma_y_of_t,
    sigma_z_of_t,
)
from .entropy import (
    EntropySeries,
    binary_entropy,
    entropy_from_bloch,
    entropy_trajectory,
    equilibrium_entropy,
)
from .model import ModelParams, RenormalizedModel, solve_renormalization, spectral_density, xi
from .self_energy import (
    RegimeReport,
    SelfEnergyEvaluator,
    find_pole,
    locate_alpha_c,
    locate_alpha_star,
    regime_at,
)

__version__ = "0.1.0"

__all__ = [
    "BlochTrajectory",
    "EntropySeries",
    "ModelParams",
    "QuadratureConfig",
    "RegimeReport",
    "RenormalizedModel",
    "SelfEnergyEvaluator",
    "binary_entropy",
    "bloch_trajectory",
    "entropy_from_bloch",
    "entropy_trajectory",
    "equilibrium_entropy",
    "find_pole",
    "locate_alpha_c",
    "locate_alpha_star",
    "markov_trajectory",
    "regime_at",
    "residue_sigma_z",
    "sigma_x_of_t",
    "sigma_y_of_t",
    "sigma_z_of_t",
    "solve_renormalization",
    "spectral_density",
    "xi",
]
