"""Plane-plane Casimir free energy, pressure and force between bulk mirrors.

The free energy per unit area is the scattering (Lifshitz) sum

    F/A = k_B T sum'_m sum_p int k dk / (2 pi) ln(1 - r_p e^{-2 kappa L}),

with ``r_p`` the product of the two mirrors' amplitudes and the ``m = 0``
term weighted by one half.  At zero temperature the Matsubara sum becomes
``hbar / (2 pi) int dxi``.  Pressures come from differentiating the
integrand analytically with respect to ``L``.

Wavevector integrals use ``u = 2 kappa L`` and ``s = u - 2 xi L / c``, so
every Matsubara term is an integral over ``s`` in ``[0, inf)`` of a smooth,
exponentially decaying function.  They are evaluated for a batch of
frequencies at once with vector-valued adaptive Gauss-Kronrod quadrature,
integrating ``[0, S]`` and doubling ``S`` until the added slab is negligible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C, GOLD_GAMMA, GOLD_OMEGA_P, HBAR, K_B
from .errors import DomainError, InvalidAmplitudeError
from .matsubara import matsubara_xi, summed
from .media import Kind, MirrorModel
from .reflection import fresnel_amplitudes, static_amplitudes
from .quadrature import integrate_half_line, log1p_ratio
from .results import EvalResult, SummationPolicy

DEFAULT_POLICY = SummationPolicy()


@dataclass(frozen=True)
class PlanePlaneProblem:
    """Two parallel mirrors of area ``A`` (m^2) at separation ``L`` (m) and temperature ``T`` (K)."""

    mirror1: object
    mirror2: object
    L: float
    A: float = 1.0
    T: float = 0.0

    def __post_init__(self):
        if not self.L > 0:
            raise DomainError(f"L must be > 0, got {self.L}")
        if not self.A > 0:
            raise DomainError(f"A must be > 0, got {self.A}")
        if not self.T >= 0:
            raise DomainError(f"T must be >= 0, got {self.T}")

    @classmethod
    def symmetric(cls, mirror, L, A=1.0, T=0.0):
        return cls(mirror, mirror, L, A, T)

    def at(self, **changes):
        """Copy with some fields replaced."""
        fields = dict(mirror1=self.mirror1, mirror2=self.mirror2, L=self.L, A=self.A, T=self.T)
        fields.update(changes)
        return PlanePlaneProblem(**fields)


@dataclass
class PlanePlaneResult:
    """Free energy (J) and pressure (Pa) from one pass of the engine."""

    free_energy: EvalResult
    pressure: EvalResult
    extra: dict = field(default_factory=dict)


def ideal_energy(L, A=1.0):
    """Zero-temperature energy between perfect mirrors, ``-hbar c pi^2 A / (720 L^3)``."""
    if not (L > 0 and A > 0):
        raise DomainError("L and A must be > 0")
    return -HBAR * C * math.pi ** 2 * A / (720.0 * L ** 3)


def ideal_force(L, A=1.0):
    """Zero-temperature force between perfect mirrors, ``-hbar c pi^2 A / (240 L^4)`` (attractive)."""
    if not (L > 0 and A > 0):
        raise DomainError("L and A must be > 0")
    return -HBAR * C * math.pi ** 2 * A / (240.0 * L ** 4)


def ideal_pressure(L):
    return ideal_force(L, 1.0)


def log_denominator(r_product, kappa, L):
    """``ln(1 - r exp(-2 kappa L))`` evaluated with ``log1p``.

    Raises
    ------
    InvalidAmplitudeError
        If the denominator is not positive, which needs ``|r| > 1``.
    """
    x = np.asarray(r_product, dtype=float) * np.exp(-2.0 * np.asarray(kappa, dtype=float) * L)
    if np.any(x >= 1.0):
        raise InvalidAmplitudeError("1 - r exp(-2 kappa L) <= 0; |r| must not exceed 1")
    out = np.log1p(-x)
    return out if out.ndim else float(out)


def _channel_sums(r_te, r_tm, u, shift=0.0):
    """Return ``u sum_p ln d`` and ``u^2 sum_p r/(e^u - r)``, both times ``e^shift``.

    ``shift <= u`` keeps terms with large ``u`` away from underflow.
    """
    e_rel = np.exp(-(u - shift))
    e = e_rel * np.exp(-shift)
    x_te, x_tm = r_te * e, r_tm * e
    if np.any(x_te >= 1.0) or np.any(x_tm >= 1.0):
        raise InvalidAmplitudeError("round-trip amplitude reaches 1; |r| must not exceed 1")
    energy = u * e_rel * (r_te * log1p_ratio(x_te) + r_tm * log1p_ratio(x_tm))
    press = u * u * e_rel * (r_te / (1.0 - x_te) + r_tm / (1.0 - x_tm))
    return energy, press


def _products(m1, m2, xi, k, static):
    if static:
        a_te, a_tm = static_amplitudes(m1, k)
        b_te, b_tm = (a_te, a_tm) if m2 is m1 else static_amplitudes(m2, k)
    else:
        a_te, a_tm = fresnel_amplitudes(m1, xi, k)
        b_te, b_tm = (a_te, a_tm) if m2 is m1 else fresnel_amplitudes(m2, xi, k)
    return a_te * b_te, a_tm * b_tm


def _k_integrals(problem, xi, rel_tol, policy, static=False):
    """Dimensionless wavevector integrals for a batch of frequencies.

    Returns ``(I, err, neval)`` with ``I[0] = int u sum_p ln d ds`` and
    ``I[1] = int u^2 sum_p r/(e^u - r) ds``, one column per frequency.
    """
    L = problem.L
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    u_min = 2.0 * L * xi / C
    m1, m2 = problem.mirror1, problem.mirror2

    def fun(pts):
        s = pts[:, :1]
        u = u_min + s
        k = np.sqrt(s * (s + 2.0 * u_min)) / (2.0 * L)
        r_te, r_tm = _products(m1, m2, xi, k, static)
        return np.stack(_channel_sums(r_te, r_tm, u, u_min), axis=1)

    vals, err, neval = integrate_half_line(fun, rel_tol, policy)
    factor = np.exp(-u_min)
    return vals * factor, err * factor, neval


def _finite_temperature(problem, policy):
    L, A, T = problem.L, problem.A, problem.T
    tol = policy.quad_rel_tol
    e_scale = K_B * T * A / (8.0 * math.pi * L ** 2)
    p_scale = -K_B * T / (8.0 * math.pi * L ** 3)
    scale = np.array([e_scale, p_scale])
    nodes = [0]

    i0, err0, n0 = _k_integrals(problem, np.array([0.0]), tol, policy, static=True)
    nodes[0] += n0

    def terms(ms):
        vals, err, n = _k_integrals(problem, matsubara_xi(T, ms), tol, policy)
        nodes[0] += n
        return vals.T * scale, err.T * np.abs(scale)

    total, err, n_terms, capped = summed(i0[:, 0] * scale, err0[:, 0] * np.abs(scale), terms,
                                         policy.rel_tol, policy.m_max_cap, policy.workers)
    diag = {"terms_used": n_terms, "nodes_used": nodes[0], "truncation_reached": capped}
    if capped:
        diag["reason"] = f"Matsubara sum hit m_max_cap={policy.m_max_cap}"
    # relative tolerance floor of the sum itself
    err = err + policy.rel_tol * np.abs(total)
    return PlanePlaneResult(EvalResult(total[0], err[0], dict(diag)),
                            EvalResult(total[1], err[1], dict(diag, _warned=True)))


def _zero_temperature(problem, policy):
    """Polar form of the frequency/wavevector integral.

    With ``kappa = u / (2L)``, ``xi = c kappa cos t`` and ``k = kappa sin t``,
    the measure ``sin t dt`` becomes ``dw`` for ``w = cos t`` on ``[0, 1]``.
    """
    L, A = problem.L, problem.A
    m1, m2 = problem.mirror1, problem.mirror2
    tol = policy.quad_rel_tol

    def fun(pts):
        w, u = pts[:, 0], pts[:, 1]
        kap = u / (2.0 * L)
        xi = C * kap * w
        k = kap * np.sqrt((1.0 - w) * (1.0 + w))
        r_te, r_tm = _products(m1, m2, xi, k, False)
        energy, press = _channel_sums(r_te, r_tm, u)
        return np.stack([energy * u, press * u], axis=-1)

    def fun_perfect(pts):
        # amplitudes do not depend on the angle, whose measure integrates to 1
        u = pts[:, 0]
        energy, press = _channel_sums(np.ones_like(u), np.ones_like(u), u)
        return np.stack([energy * u, press * u], axis=-1)

    if all(isinstance(m, MirrorModel) and m.kind is Kind.PERFECT for m in (m1, m2)):
        vals, err, nodes = integrate_half_line(fun_perfect, tol, policy)
    else:
        vals, err, nodes = integrate_half_line(fun, tol, policy, lower=(0.0,), upper=(1.0,))
    e_scale = HBAR * C * A / (32.0 * math.pi ** 2 * L ** 3)
    p_scale = -HBAR * C / (32.0 * math.pi ** 2 * L ** 4)
    diag = {"terms_used": 0, "nodes_used": nodes, "truncation_reached": False}
    return PlanePlaneResult(EvalResult(vals[0] * e_scale, err[0] * abs(e_scale), dict(diag)),
                            EvalResult(vals[1] * p_scale, err[1] * abs(p_scale), dict(diag)))


def evaluate(problem, policy=DEFAULT_POLICY):
    """Free energy and pressure in one pass (zero-temperature path when ``T == 0``)."""
    if problem.T == 0:
        return _zero_temperature(problem, policy)
    return _finite_temperature(problem, policy)


def free_energy(problem, policy=DEFAULT_POLICY):
    """Free energy (J) of a plane-plane problem.

    Uses the truncated Matsubara sum for ``T > 0`` and delegates to
    :func:`free_energy_T0` when ``T == 0``.  The result is negative for
    identical mirrors.
    """
    return evaluate(problem, policy).free_energy


def free_energy_T0(problem, policy=DEFAULT_POLICY):
    """Zero-temperature energy (J) from the continuous frequency integral."""
    if problem.T != 0:
        raise DomainError("free_energy_T0 needs T == 0; use free_energy for T > 0")
    return _zero_temperature(problem, policy).free_energy


def pressure(problem, policy=DEFAULT_POLICY):
    """Pressure (Pa), ``-dF/dL / A``; negative means attraction."""
    return evaluate(problem, policy).pressure


def force(problem, policy=DEFAULT_POLICY):
    """Force (N), ``-dF/dL``; negative means attraction."""
    return pressure(problem, policy).scaled(problem.A)


def _require_zero_t(problem):
    if problem.T != 0:
        raise DomainError("eta factors compare to the T = 0 ideal result; use eta_F_thermal for T > 0")


def eta_F(problem, policy=DEFAULT_POLICY):
    """Force reduction factor relative to perfect mirrors at ``T = 0``."""
    _require_zero_t(problem)
    return pressure(problem, policy).value / ideal_pressure(problem.L)


def eta_E(problem, policy=DEFAULT_POLICY):
    """Energy reduction factor relative to perfect mirrors at ``T = 0``."""
    _require_zero_t(problem)
    return free_energy(problem, policy).value / ideal_energy(problem.L, problem.A)


def eta_F_thermal(problem, policy=DEFAULT_POLICY):
    """Finite-temperature force divided by the zero-temperature ideal force."""
    return pressure(problem, policy).value / ideal_pressure(problem.L)


def thermal_ratio(L, T, omega_p=GOLD_OMEGA_P, gamma=GOLD_GAMMA, policy=DEFAULT_POLICY):
    """Plasma-model force divided by Drude-model force at equal ``omega_p``, ``L`` and ``T``."""
    if not (L > 0 and T > 0):
        raise DomainError("thermal_ratio needs L > 0 and T > 0")
    plasma = MirrorModel.plasma(omega_p)
    drude = MirrorModel.drude(omega_p, gamma)
    p_plasma = pressure(PlanePlaneProblem(plasma, plasma, L, 1.0, T), policy).value
    p_drude = pressure(PlanePlaneProblem(drude, drude, L, 1.0, T), policy).value
    return p_plasma / p_drude


__all__ = [
    "PlanePlaneProblem", "PlanePlaneResult", "ideal_energy", "ideal_force", "ideal_pressure",
    "matsubara_xi", "log_denominator", "evaluate", "free_energy", "free_energy_T0", "pressure",
    "force", "eta_F", "eta_E", "eta_F_thermal", "thermal_ratio",
]
