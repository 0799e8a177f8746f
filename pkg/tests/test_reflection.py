import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from casimir.constants import C, GOLD_OMEGA_P
from casimir.errors import DomainError, RangeError
from casimir.media import EpsilonTable, MirrorModel
from casimir.reflection import (CustomReflector, Polarization, SpectralPoint, fresnel_amplitudes, fresnel_r,
                                fresnel_r_static, kappa, static_amplitudes)

xi_values = st.floats(1e8, 1e18)
k_values = st.floats(1e2, 1e10)


def _mp_fresnel(eps, xi, k):
    mp.mp.dps = 40
    eps, xi, k = mp.mpf(eps), mp.mpf(xi), mp.mpf(k)
    kap = mp.sqrt(k ** 2 + (xi / C) ** 2)
    kap_t = mp.sqrt(k ** 2 + eps * (xi / C) ** 2)
    return (kap - kap_t) / (kap + kap_t), (eps * kap - kap_t) / (eps * kap + kap_t)


@given(xi_values, k_values)
def test_plasma_amplitudes_against_mpmath(xi, k):
    model = MirrorModel.plasma()
    eps = 1 + mp.mpf(GOLD_OMEGA_P) ** 2 / mp.mpf(xi) ** 2
    te, tm = _mp_fresnel(eps, xi, k)
    rte, rtm = fresnel_amplitudes(model, xi, k)
    assert float(rte) == pytest.approx(float(te), rel=1e-12)
    assert float(rtm) == pytest.approx(float(tm), rel=1e-12)


@given(xi_values, k_values)
def test_amplitudes_are_passive_with_fixed_signs(xi, k):
    for model in (MirrorModel.plasma(), MirrorModel.drude()):
        rte, rtm = fresnel_amplitudes(model, xi, k)
        assert -1 <= rte <= 0 <= rtm <= 1


@given(xi_values, k_values)
def test_drude_without_relaxation_matches_plasma_bitwise(xi, k):
    a = fresnel_amplitudes(MirrorModel.drude(gamma=0.0), xi, k)
    b = fresnel_amplitudes(MirrorModel.plasma(), xi, k)
    assert a[0] == b[0] and a[1] == b[1]


def test_perfect_mirror():
    rte, rtm = fresnel_amplitudes(MirrorModel.perfect(), np.array([1e14, 1e15]), 1e6)
    assert np.all(rte == -1) and np.all(rtm == 1)
    assert fresnel_r_static(MirrorModel.perfect(), 1e6, "TE") == -1.0


def test_static_limits():
    k = 2e6
    assert fresnel_r_static(MirrorModel.drude(), k, Polarization.TE) == 0.0
    assert fresnel_r_static(MirrorModel.drude(), k, Polarization.TM) == 1.0
    kp = GOLD_OMEGA_P / C
    expected = (k - np.sqrt(k * k + kp * kp)) / (k + np.sqrt(k * k + kp * kp))
    assert fresnel_r_static(MirrorModel.plasma(), k, "TE") == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("model", [MirrorModel.plasma(), MirrorModel.drude()])
def test_static_limit_is_continuous_for_tm(model):
    k = 1e6
    near = fresnel_amplitudes(model, 1.0, k)
    static = static_amplitudes(model, k)
    assert near[1] == pytest.approx(static[1], abs=1e-8)


def test_plasma_te_static_limit_is_continuous():
    k = 1e6
    model = MirrorModel.plasma()
    assert fresnel_amplitudes(model, 1e3, k)[0] == pytest.approx(static_amplitudes(model, k)[0], rel=1e-9)


def test_spectral_point_routes_zero_frequency():
    pt = SpectralPoint(0.0, 1e6, "TE")
    assert fresnel_r(MirrorModel.drude(), pt) == 0.0
    assert fresnel_r(MirrorModel.plasma(), 1e15, 1e6, "TM") == pytest.approx(
        float(fresnel_amplitudes(MirrorModel.plasma(), 1e15, 1e6)[1]))
    assert pt.kappa == pytest.approx(1e6)
    assert kappa(C, 0.0) == pytest.approx(1.0)


def test_invalid_points():
    with pytest.raises(DomainError):
        SpectralPoint(-1.0, 1.0, "TE")
    with pytest.raises(DomainError):
        SpectralPoint(0.0, 0.0, "TM")
    with pytest.raises(ValueError):
        SpectralPoint(1.0, 1.0, "XX")
    with pytest.raises(DomainError):
        fresnel_r_static(MirrorModel.plasma(), 0.0, "TE")


def test_custom_reflector():
    half = CustomReflector(lambda xi, k: (-0.5 * np.ones_like(xi * k), 0.5 * np.ones_like(xi * k)),
                           lambda k: (-0.5, 0.5), label="half")
    assert fresnel_r(half, 1e14, 1e6, "TE") == -0.5
    assert fresnel_r_static(half, 1e6, "TM") == 0.5
    bad = CustomReflector(lambda xi, k: (1.5 * np.ones_like(xi), 0.0 * xi))
    with pytest.raises(DomainError):
        fresnel_amplitudes(bad, 1e14, 1e6)
    with pytest.raises(DomainError):
        static_amplitudes(CustomReflector(lambda xi, k: (xi, k)), 1e6)


def test_dielectric_table_has_no_static_limit():
    table = EpsilonTable(np.array([1e12, 1e16]), np.array([5.0, 2.0]))
    with pytest.raises(RangeError):
        static_amplitudes(MirrorModel.tabulated(table), 1e6)
