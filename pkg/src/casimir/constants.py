"""Physical constants (CODATA 2018 / SI 2019 exact values) and gold defaults.

All values are pinned here so results never depend on the installed version
of a constants package.
"""
import math

PLANCK = 6.62607015e-34  # J s, exact
HBAR = PLANCK / (2.0 * math.pi)  # J s
C = 299792458.0  # m/s, exact
K_B = 1.380649e-23  # J/K, exact
E_CHARGE = 1.602176634e-19  # C, exact (J per eV)

ZETA3 = 1.2020569031595942

#: Gold plasma wavelength, 136 nm.
GOLD_PLASMA_WAVELENGTH = 136e-9
#: Gold plasma angular frequency derived from the 136 nm plasma wavelength.
GOLD_OMEGA_P = 2.0 * math.pi * C / GOLD_PLASMA_WAVELENGTH
#: Placeholder relaxation rate; only the ratio gamma << omega_p is physical input.
GOLD_GAMMA_RATIO = 1.0 / 250.0
GOLD_GAMMA = GOLD_OMEGA_P * GOLD_GAMMA_RATIO


def as_dict():
    """Every constant used by the engine, for run metadata."""
    return {
        "planck_J_s": PLANCK,
        "hbar_J_s": HBAR,
        "c_m_per_s": C,
        "k_B_J_per_K": K_B,
        "eV_J": E_CHARGE,
        "zeta3": ZETA3,
        "gold_plasma_wavelength_m": GOLD_PLASMA_WAVELENGTH,
        "gold_omega_p_rad_per_s": GOLD_OMEGA_P,
        "gold_gamma_rad_per_s": GOLD_GAMMA,
    }
