import math
import warnings

import numpy as np
import pytest

from casimir.constants import C, HBAR
from casimir.errors import DomainError, FitError, TruncationWarning
from casimir.media import MirrorModel
from casimir.pfa import PlaneSphereGeometry, pfa_energy_ideal, pfa_gradient_ideal
from casimir.planesphere import (RhoG, TruncationSpec, aspect_geometry, beta_G_fit, evaluate_planesphere,
                                 free_energy_planesphere, gradient, rho_G, spectral_sums,
                                 within_experimental_bound)

PERFECT, PLASMA, DRUDE = MirrorModel.perfect(), MirrorModel.plasma(), MirrorModel.drude()


def _fixed(ell):
    return TruncationSpec(ell_max=ell, auto=False)


def test_far_sphere_matches_dipole_limit():
    # perfect sphere far from a perfect plane: -9 hbar c R^3 / (16 pi d^4), d the centre distance
    R, L = 1e-6, 20e-6
    e = free_energy_planesphere(PlaneSphereGeometry(R, L), PERFECT, 0.0, _fixed(4)).value
    dipole = -9 * HBAR * C * R ** 3 / (16 * math.pi * (L + R) ** 4)
    assert e / dipole == pytest.approx(1.0, abs=0.01)


def test_energy_ratio_regression_at_half_radius():
    geom = aspect_geometry(0.5)
    e = free_energy_planesphere(geom, PERFECT, 0.0, _fixed(20)).value
    assert e / pfa_energy_ideal(geom) == pytest.approx(0.62336, rel=1e-4)


def test_energy_grows_with_cutoff():
    geom = aspect_geometry(0.3)
    e = [free_energy_planesphere(geom, PERFECT, 0.0, _fixed(n)).value for n in (4, 8, 16)]
    assert e[0] > e[1] > e[2] > pfa_energy_ideal(geom)


def test_far_regime_lies_far_below_pfa():
    geom = aspect_geometry(5.0)
    e = free_energy_planesphere(geom, PERFECT, 0.0, _fixed(6)).value
    assert 0 < e / pfa_energy_ideal(geom) < 0.1


def test_gradient_methods_agree():
    geom = aspect_geometry(0.5)
    values = {m: gradient(geom, PERFECT, 0.0, 10, method=m)[0] for m in ("analytic", "mixed", "fd5")}
    assert values["analytic"] > 0
    assert values["mixed"] == pytest.approx(values["analytic"], rel=1e-6)
    assert values["fd5"] == pytest.approx(values["analytic"], rel=1e-5)
    with pytest.raises(DomainError):
        gradient(geom, PERFECT, 0.0, 10, method="spline")


def test_force_and_gradient_are_derivatives():
    geom = aspect_geometry(0.5)
    h = 1e-3 * geom.L
    vals, _, _ = spectral_sums(geom, PERFECT, 0.0, 8, offsets=(-h, 0.0, h))
    assert -vals[1, 1] == pytest.approx(-(vals[2, 0] - vals[0, 0]) / (2 * h), rel=1e-6)
    res = evaluate_planesphere(geom, PERFECT, 0.0, _fixed(8))
    assert res.force.value < 0 < res.gradient.value


def test_material_mirrors_bind_less():
    geom = PlaneSphereGeometry(1e-6, 0.5e-6)
    perfect = free_energy_planesphere(geom, PERFECT, 0.0, _fixed(8)).value
    plasma = free_energy_planesphere(geom, PLASMA, 0.0, _fixed(8)).value
    mixed = free_energy_planesphere(geom, (DRUDE, PLASMA), 0.0, _fixed(8)).value
    assert perfect < plasma < 0
    assert mixed == pytest.approx(plasma, rel=0.05)


def test_room_temperature_close_to_zero_temperature_at_short_range():
    geom = PlaneSphereGeometry(1e-6, 0.5e-6)
    cold = free_energy_planesphere(geom, PERFECT, 0.0, _fixed(8)).value
    warm = evaluate_planesphere(geom, PERFECT, 300.0, _fixed(8))
    assert warm.energy.value == pytest.approx(cold, rel=0.05)
    assert warm.energy.diagnostics["terms_used"] > 1


def test_automatic_cutoff_reports_convergence_and_cap():
    res = evaluate_planesphere(aspect_geometry(1.0), PERFECT, 0.0, TruncationSpec(min_ell=5))
    assert res.converged and res.valid
    assert [h[0] for h in res.history] == [5, 10, 20][:len(res.history)]
    with pytest.warns(TruncationWarning):
        capped = evaluate_planesphere(aspect_geometry(0.5), PERFECT, 0.0,
                                      TruncationSpec(min_ell=4, cap=6, target_rel=1e-9))
    assert not capped.converged and capped.energy.truncated and capped.ell_max == 6


def test_rho_g_below_one_at_moderate_aspect():
    r = rho_G(aspect_geometry(0.5), PERFECT, 0.0, TruncationSpec(cap=40))
    assert isinstance(r, RhoG)
    assert r.G_pfa == pytest.approx(pfa_gradient_ideal(aspect_geometry(0.5)), rel=1e-9)
    assert 0.7 < r.value < 1.0 and r.valid


def test_truncation_spec():
    spec = TruncationSpec()
    assert spec.resolve(0.1) == 50 and spec.resolve(2.0) == 10 and spec.resolve(1e-4) == 400
    assert spec.is_valid(0.05, 100) and not spec.is_valid(0.04, 100)
    with pytest.raises(DomainError):
        TruncationSpec(ell_max=0)
    with pytest.raises(DomainError):
        TruncationSpec(target_rel=2.0)


@pytest.mark.parametrize("planted,curv", [(-0.48, 0.3), (-0.21, -0.1), (0.0, 1.0)])
def test_slope_fit_recovers_planted_slope(planted, curv):
    xs = np.array([0.02, 0.05, 0.1, 0.15, 0.2])
    beta, stderr = beta_G_fit(list(zip(xs, 1 + planted * xs + curv * xs ** 2)))
    assert beta == pytest.approx(planted, abs=1e-12)
    assert stderr < 1e-10


def test_slope_fit_degenerate_inputs():
    with pytest.raises(FitError):
        beta_G_fit([(0.1, 0.95), (0.2, 0.9)])
    with pytest.raises(FitError):
        beta_G_fit([(0.1, 0.95), (0.1, 0.95), (0.2, 0.9)])
    with pytest.raises(FitError):
        beta_G_fit([(0.1, 0.95, False), (0.15, 0.93), (0.2, 0.9)])
    with pytest.raises(FitError):
        beta_G_fit([(0.1, 0.95), (0.15, 0.93), (0.2, 0.9)], weights=[1, 0, 1])


def test_experimental_bound_classifier():
    assert not within_experimental_bound(-0.48)
    assert within_experimental_bound(-0.21)
    assert not within_experimental_bound(0.4)


def test_invalid_sphere_and_temperature():
    with pytest.raises(DomainError):
        free_energy_planesphere(aspect_geometry(0.5), DRUDE, 0.0, _fixed(4))
    with pytest.raises(DomainError):
        evaluate_planesphere(aspect_geometry(0.5), PERFECT, -1.0, _fixed(4))


def test_repeat_is_bitwise_identical():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        a = free_energy_planesphere(aspect_geometry(0.5), PERFECT, 0.0, _fixed(6)).value
        b = free_energy_planesphere(aspect_geometry(0.5), PERFECT, 0.0, _fixed(6)).value
    assert a == b


def test_plasma_mirrors_approach_pfa_from_below():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        rho = [rho_G(aspect_geometry(x), PLASMA, 0.0, TruncationSpec(cap=34)).value for x in (0.5, 0.3)]
    assert rho[0] < rho[1] < 1
