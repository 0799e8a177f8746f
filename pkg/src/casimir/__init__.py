"""Casimir free energies and forces between real mirrors from scattering theory."""
from . import constants
from .errors import (CasimirError, ConfigError, ConvergenceError, DomainError, FitError,
                     InvalidAmplitudeError, NumericalFailure, RangeError, TruncationWarning)
from .media import EpsilonTable, MirrorModel, eval_epsilon, eval_epsilon_tabulated
from .reflection import CustomReflector, Polarization, SpectralPoint, fresnel_r, fresnel_r_static, kappa
from .results import EvalResult, SummationPolicy
from .lifshitz import (PlanePlaneProblem, eta_E, eta_F, force, free_energy, free_energy_T0,
                       ideal_energy, ideal_force, pressure, thermal_ratio)

__version__ = "0.1.0"

__all__ = [
    "constants", "CasimirError", "ConfigError", "ConvergenceError", "DomainError", "FitError",
    "InvalidAmplitudeError", "NumericalFailure", "RangeError", "TruncationWarning", "EpsilonTable",
    "MirrorModel", "eval_epsilon", "eval_epsilon_tabulated", "CustomReflector", "Polarization",
    "SpectralPoint", "fresnel_r", "fresnel_r_static", "kappa", "EvalResult", "SummationPolicy",
    "PlanePlaneProblem", "eta_E", "eta_F", "force", "free_energy", "free_energy_T0", "ideal_energy",
    "ideal_force", "pressure", "thermal_ratio", "__version__",
]
