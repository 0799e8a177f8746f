import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from casimir.cavity1d import Cavity1D, force_1d, free_energy_1d, ideal_energy_1d, mode_sum_oracle
from casimir.constants import C, HBAR, K_B
from casimir.errors import ConvergenceError, DomainError, InvalidAmplitudeError


def test_perfect_mirrors_match_closed_form():
    L = 1e-6
    e = free_energy_1d(Cavity1D(1.0, 1.0, L, 0.0))
    assert e.value == pytest.approx(-math.pi * HBAR * C / (24 * L), rel=1e-9)
    assert force_1d(Cavity1D(1.0, 1.0, L)).value == pytest.approx(-math.pi * HBAR * C / (24 * L ** 2), rel=1e-9)


@pytest.mark.parametrize("L", [1e-8, 1e-6, 1e-3])
def test_mode_sum_agrees_with_integral(L):
    assert mode_sum_oracle(L) == pytest.approx(ideal_energy_1d(L), rel=1e-8)
    assert free_energy_1d(Cavity1D(L=L)).value == pytest.approx(mode_sum_oracle(L), rel=1e-4)


@pytest.mark.parametrize("n", [10, 30])
def test_mode_sum_with_too_few_modes_fails(n):
    with pytest.raises(ConvergenceError):
        mode_sum_oracle(1e-6, cutoff_count=n)


def test_constant_partial_mirrors_match_polylog():
    # int_0^inf ln(1 - a e^{-v}) dv = -Li_2(a)
    import mpmath as mp
    r1, r2, L = 0.7, 0.4, 1e-6
    exact = -HBAR * C / (4 * math.pi * L) * float(mp.polylog(2, r1 * r2))
    assert free_energy_1d(Cavity1D(r1, r2, L)).value == pytest.approx(exact, rel=1e-9)


def test_high_temperature_keeps_only_static_term():
    r, L, T = 0.5, 1e-3, 1e4
    expected = 0.5 * K_B * T * math.log(1 - r * r)
    assert free_energy_1d(Cavity1D(r, r, L, T)).value == pytest.approx(expected, rel=1e-9)


def test_transparent_mirror_gives_zero():
    assert free_energy_1d(Cavity1D(0.0, 1.0, 1e-6)).value == 0.0
    assert free_energy_1d(Cavity1D(0.0, 0.9, 1e-6, 300.0)).value == 0.0


def test_frequency_dependent_amplitudes():
    xc = C / 1e-6

    def r(xi):
        return 1.0 / (1.0 + np.asarray(xi) / xc)

    e = free_energy_1d(Cavity1D(r, r, 1e-6)).value
    assert ideal_energy_1d(1e-6) < e < 0
    scalar = free_energy_1d(Cavity1D(lambda xi: 1.0 / (1.0 + xi / xc), r, 1e-6)).value
    assert scalar == pytest.approx(e, rel=1e-10)


@pytest.mark.parametrize("T", [0.0, 300.0])
def test_force_is_derivative_of_energy(T):
    L, r = 2e-6, 0.8
    h = 1e-3 * L
    e = [free_energy_1d(Cavity1D(r, r, L + d, T)).value for d in (-h, h)]
    assert force_1d(Cavity1D(r, r, L, T)).value == pytest.approx(-(e[1] - e[0]) / (2 * h), rel=1e-6)


@given(st.floats(0.05, 0.99), st.floats(0.05, 0.99))
def test_more_reflective_mirrors_bind_more(r, s):
    lo, hi = sorted((r, s))
    e_lo = free_energy_1d(Cavity1D(lo, lo, 1e-6)).value
    e_hi = free_energy_1d(Cavity1D(hi, hi, 1e-6)).value
    assert e_hi <= e_lo < 0


def test_invalid_input():
    with pytest.raises(DomainError):
        Cavity1D(1.5, 1.0)
    with pytest.raises(DomainError):
        Cavity1D(L=0.0)
    with pytest.raises(InvalidAmplitudeError):
        free_energy_1d(Cavity1D(1.0, 1.0, 1e-6, 300.0))
    with pytest.raises(InvalidAmplitudeError):
        free_energy_1d(Cavity1D(lambda xi: 2.0 + 0 * xi, 1.0, 1e-6))
