"""Plane-sphere interaction beyond the proximity approximation (multipole basis)."""
from .energy import (DEFAULT_PS_POLICY, PlaneSphereResult, RhoG, TruncationSpec, aspect_geometry,
                     beta_G_fit, evaluate_planesphere, free_energy_planesphere, gradient, rho_G, spectral_sums,
                     within_experimental_bound)
from .mie import mie_amplitudes, mie_log_amplitudes
from .roundtrip import (RoundTripOperator, SphericalMode, assemble_roundtrip, block_sum,
                        frequency_data, log_det_and_derivatives)

__all__ = [
    "DEFAULT_PS_POLICY", "PlaneSphereResult", "RhoG", "TruncationSpec", "aspect_geometry", "beta_G_fit",
    "evaluate_planesphere", "free_energy_planesphere", "gradient", "rho_G", "spectral_sums",
    "within_experimental_bound", "mie_amplitudes", "mie_log_amplitudes", "RoundTripOperator",
    "SphericalMode", "assemble_roundtrip", "block_sum", "frequency_data", "log_det_and_derivatives",
]
