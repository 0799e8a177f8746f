import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from casimir import constants
from casimir.errors import DomainError, RangeError
from casimir.matsubara import matsubara_xi
from casimir.media import (EpsilonTable, MirrorModel, conductivity, eval_epsilon, eval_epsilon_tabulated, gold,
                           mean_energy_per_mode, mean_occupation, omega_p_from_wavelength, plasma_wavelength,
                           thermal_wavelength, vacuum_energy_density_cutoff)

xi_values = st.floats(1e9, 1e19)


def test_first_matsubara_frequency_at_room_temperature():
    assert matsubara_xi(300.0, 1) == pytest.approx(2.4678e14, rel=1e-4)
    assert matsubara_xi(300.0, 0) == 0.0


def test_thermal_wavelength_at_room_temperature():
    assert thermal_wavelength(300.0) == pytest.approx(7.633e-6, rel=1e-3)


def test_gold_plasma_frequency_round_trip():
    assert plasma_wavelength(constants.GOLD_OMEGA_P) == pytest.approx(136e-9, rel=1e-15)
    assert omega_p_from_wavelength(plasma_wavelength(3e15)) == pytest.approx(3e15, rel=1e-15)


def test_constants_table_lists_every_constant():
    table = constants.as_dict()
    assert table["hbar_J_s"] == constants.HBAR
    assert table["gold_gamma_rad_per_s"] == constants.GOLD_GAMMA
    assert len(table) == 9


def test_mean_occupation_unit_ratio():
    omega = constants.K_B * 300.0 / constants.HBAR
    assert mean_occupation(omega, 300.0) == pytest.approx(0.5819767068693265, rel=1e-14)
    assert mean_occupation(omega, 0.0) == 0.0


def test_mean_energy_high_temperature_series():
    # (n + 1/2) hbar w = k T (1 + y^2/12 - y^4/720 + ...) with y = hbar w / k T
    T = 300.0
    y = 1e-2
    omega = y * constants.K_B * T / constants.HBAR
    series = constants.K_B * T * (1 + y ** 2 / 12 - y ** 4 / 720)
    assert mean_energy_per_mode(omega, T) == pytest.approx(series, rel=1e-12)


def test_zero_point_energy_density_against_quadrature():
    omega_max = 3e15
    mp.mp.dps = 30
    density = mp.quad(lambda w: w ** 2 / (mp.pi ** 2 * constants.C ** 3) * constants.HBAR * w / 2, [0, omega_max])
    assert vacuum_energy_density_cutoff(omega_max) == pytest.approx(float(density), rel=1e-12)


@given(xi_values)
def test_plasma_permittivity_against_mpmath(xi):
    wp = constants.GOLD_OMEGA_P
    exact = 1 + mp.mpf(wp) ** 2 / mp.mpf(xi) ** 2
    assert eval_epsilon(MirrorModel.plasma(), xi) == pytest.approx(float(exact), rel=1e-14)


@given(xi_values, st.floats(1e10, 1e15))
def test_drude_permittivity_against_mpmath(xi, gamma):
    wp = constants.GOLD_OMEGA_P
    exact = 1 + mp.mpf(wp) ** 2 / (mp.mpf(xi) * (mp.mpf(xi) + gamma))
    assert eval_epsilon(MirrorModel.drude(wp, gamma), xi) == pytest.approx(float(exact), rel=1e-14)


@given(xi_values)
def test_drude_without_relaxation_is_plasma(xi):
    assert eval_epsilon(MirrorModel.drude(gamma=0.0), xi) == eval_epsilon(MirrorModel.plasma(), xi)


@given(st.floats(1e9, 1e18), st.floats(1.01, 100.0))
def test_permittivity_above_one_and_decreasing(xi, factor):
    for model in (MirrorModel.plasma(), MirrorModel.drude()):
        lo, hi = eval_epsilon(model, xi), eval_epsilon(model, xi * factor)
        assert lo > 1 and hi > 1 and hi <= lo


def test_conductivity_matches_permittivity():
    model = MirrorModel.drude()
    xi = 1e14
    assert conductivity(model, xi) / xi == pytest.approx(eval_epsilon(model, xi) - 1, rel=1e-14)


def test_invalid_inputs():
    with pytest.raises(DomainError):
        eval_epsilon(MirrorModel.plasma(), 0.0)
    with pytest.raises(DomainError):
        eval_epsilon(MirrorModel.perfect(), 1e14)
    with pytest.raises(DomainError):
        MirrorModel.plasma(-1.0)
    with pytest.raises(DomainError):
        MirrorModel.drude(gamma=-1.0)
    with pytest.raises(DomainError):
        thermal_wavelength(0.0)
    with pytest.raises(DomainError):
        mean_occupation(0.0, 300.0)
    with pytest.raises(DomainError):
        gold("silver")


def test_gold_helper():
    assert gold("plasma") == MirrorModel.plasma()
    assert gold().gamma == constants.GOLD_GAMMA
    assert MirrorModel.drude().describe()["gamma_rad_per_s"] == constants.GOLD_GAMMA


def _drude_table():
    return EpsilonTable.sample(MirrorModel.drude(), 1e11, 1e18, per_decade=50)


def test_table_exact_at_nodes():
    table = _drude_table()
    assert np.array_equal(eval_epsilon_tabulated(table, table.xi), table.eps)


def test_table_reproduces_power_law_exactly_between_nodes():
    # eps - 1 of the plasma model is a power law, which log-log interpolation carries exactly
    table = EpsilonTable.sample(MirrorModel.plasma(), 1e12, 1e17, per_decade=5)
    xi = np.geomspace(1.3e12, 9e16, 37)
    assert np.allclose(table(xi), eval_epsilon(MirrorModel.plasma(), xi), rtol=1e-12, atol=0)


def test_table_interpolates_drude_closely():
    table = _drude_table()
    xi = np.geomspace(2e11, 9e17, 101)
    model = MirrorModel.tabulated(table)
    assert np.allclose(eval_epsilon(model, xi), eval_epsilon(MirrorModel.drude(), xi), rtol=1e-4)


def test_table_out_of_range_reports_interval():
    table = _drude_table()
    with pytest.raises(RangeError) as info:
        eval_epsilon_tabulated(table, 1e19)
    assert info.value.interval == table.interval
    with pytest.raises(RangeError):
        eval_epsilon(MirrorModel.tabulated(table), 1e10)


def test_table_with_drude_tail_extends_below_range():
    interband = EpsilonTable(np.array([1e12, 1e18]), np.array([2.0, 2.0]))
    model = MirrorModel.tabulated(interband, omega_p=constants.GOLD_OMEGA_P, gamma=constants.GOLD_GAMMA)
    xi = 1e9
    expected = 2.0 + constants.GOLD_OMEGA_P ** 2 / (xi * (xi + constants.GOLD_GAMMA))
    assert eval_epsilon(model, xi) == pytest.approx(expected, rel=1e-14)


def test_table_csv_round_trip(tmp_path):
    table = _drude_table()
    path = tmp_path / "eps.csv"
    table.to_csv(path)
    back = EpsilonTable.from_csv(path)
    assert np.array_equal(back.xi, table.xi) and np.array_equal(back.eps, table.eps)


def test_table_rejects_bad_data(tmp_path):
    with pytest.raises(DomainError):
        EpsilonTable(np.array([2.0, 1.0]), np.array([3.0, 3.0]))
    with pytest.raises(DomainError):
        EpsilonTable(np.array([1.0, 2.0]), np.array([0.5, 3.0]))
    path = tmp_path / "bad.csv"
    path.write_text("freq,eps\n1,2\n")
    with pytest.raises(DomainError):
        EpsilonTable.from_csv(path)


def test_thermal_wavelength_definition():
    assert thermal_wavelength(10.0) == pytest.approx(constants.HBAR * constants.C / (constants.K_B * 10.0))
    assert math.isclose(thermal_wavelength(1.0) / thermal_wavelength(2.0), 2.0)
