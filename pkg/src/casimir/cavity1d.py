"""One-dimensional scalar Fabry-Perot cavity.

Two mirrors on a line, each with a frequency dependent amplitude
``r_i(xi)`` at imaginary frequency.  The free energy is

    T = 0:  E = hbar / (2 pi) int_0^inf dxi ln(1 - r1 r2 exp(-2 xi L / c))
    T > 0:  E = k_B T sum'_m ln(1 - r1 r2 exp(-2 xi_m L / c))

For perfect mirrors the zero-temperature value ``-pi hbar c / (24 L)`` can
also be reached from the regularised sum of the cavity mode energies, which
:func:`mode_sum_oracle` implements independently of the integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .constants import C, HBAR, K_B
from .errors import ConvergenceError, DomainError, InvalidAmplitudeError
from .matsubara import matsubara_xi, summed
from .quadrature import integrate_half_line, log1p_ratio
from .results import EvalResult, SummationPolicy

Amplitude = Union[float, Callable]


def _as_function(r):
    if callable(r):
        return r
    value = float(r)
    if abs(value) > 1:
        raise DomainError(f"|r| must be <= 1, got {value}")
    return lambda xi: np.full(np.shape(xi), value)


def _evaluate(fn, xi):
    xi = np.asarray(xi, dtype=float)
    out = np.asarray(fn(xi), dtype=float)
    if out.shape != xi.shape:
        # scalar-only callables
        out = np.array([float(fn(float(x))) for x in xi.ravel()]).reshape(xi.shape)
    if np.any(np.abs(out) > 1.0 + 1e-12):
        raise InvalidAmplitudeError("1-D mirror amplitude with |r| > 1")
    return out


@dataclass(frozen=True)
class Cavity1D:
    """Two mirrors at distance ``L`` (m) and temperature ``T`` (K).

    ``r1`` and ``r2`` are constants or callables of ``xi`` in rad/s (array in,
    array out preferred; scalar callables are looped over).
    """

    r1: Amplitude = 1.0
    r2: Amplitude = 1.0
    L: float = 1e-6
    T: float = 0.0

    def __post_init__(self):
        if not self.L > 0:
            raise DomainError(f"L must be > 0, got {self.L}")
        if not self.T >= 0:
            raise DomainError(f"T must be >= 0, got {self.T}")
        _as_function(self.r1)
        _as_function(self.r2)

    def product(self, xi):
        return _evaluate(_as_function(self.r1), xi) * _evaluate(_as_function(self.r2), xi)


def _terms(cav, xi):
    """Energy term ``ln d`` and ``L``-derivative weight ``(2 xi / c) r e^{-v} / d``."""
    v = 2.0 * xi * cav.L / C
    x = cav.product(xi) * np.exp(-v)
    if np.any(x >= 1.0):
        raise InvalidAmplitudeError("1 - r1 r2 exp(-2 xi L / c) <= 0")
    return np.log1p(-x), (2.0 * xi / C) * x / (1.0 - x)


def _zero_temperature(cav, policy):
    L = cav.L

    def fun(pts):
        v = pts[:, 0]
        xi = v * C / (2.0 * L)
        x = cav.product(xi) * np.exp(-v)
        if np.any(x >= 1.0):
            raise InvalidAmplitudeError("1 - r1 r2 exp(-2 xi L / c) <= 0")
        return np.stack([x * log1p_ratio(x), v * x / (1.0 - x)], axis=-1)

    vals, err, nodes = integrate_half_line(fun, policy.quad_rel_tol, policy)
    scale = np.array([HBAR * C / (4.0 * math.pi * L), -HBAR * C / (4.0 * math.pi * L ** 2)])
    diag = {"terms_used": 0, "nodes_used": nodes, "truncation_reached": False}
    return vals * scale, err * np.abs(scale), diag


def _finite_temperature(cav, policy):
    kt = K_B * cav.T
    e0, _ = _terms(cav, np.array([0.0]))

    def terms(ms):
        e, f = _terms(cav, matsubara_xi(cav.T, ms))
        vals = np.stack([kt * e, -kt * f], axis=-1)
        return vals, 1e-16 * np.abs(vals)

    total, err, n_terms, capped = summed(np.array([kt * e0[0], 0.0]), np.zeros(2), terms,
                                         policy.rel_tol, policy.m_max_cap, policy.workers)
    diag = {"terms_used": n_terms, "nodes_used": 0, "truncation_reached": capped}
    if capped:
        diag["reason"] = f"Matsubara sum hit m_max_cap={policy.m_max_cap}"
    return total, err + policy.rel_tol * np.abs(total), diag


def _solve(cav, policy):
    return _zero_temperature(cav, policy) if cav.T == 0 else _finite_temperature(cav, policy)


def free_energy_1d(cavity, policy=SummationPolicy()):
    """Free energy (J) of the 1-D cavity."""
    vals, err, diag = _solve(cavity, policy)
    return EvalResult(vals[0], err[0], diag)


def force_1d(cavity, policy=SummationPolicy()):
    """Force ``-dE/dL`` (N) from the analytic ``L``-derivative; negative means attraction."""
    vals, err, diag = _solve(cavity, policy)
    return EvalResult(vals[1], err[1], dict(diag, _warned=True))


def ideal_energy_1d(L):
    """``-pi hbar c / (24 L)``, the perfect-mirror value at ``T = 0``."""
    if not L > 0:
        raise DomainError("L must be > 0")
    return -math.pi * HBAR * C / (24.0 * L)


def _regulated_sum(a, n):
    # sum_{k<=n} k e^{-a k} minus its 1/a^2 divergence
    k = np.arange(1, n + 1, dtype=float)
    return float(np.sum(k * np.exp(-a * k))) - 1.0 / (a * a)


def mode_sum_oracle(L, cutoff_count=10_000, levels=4):
    """Perfect-mirror 1-D energy (J) from the regularised mode sum.

    Mode ``n`` has ``omega_n = n pi c / L`` and zero-point energy
    ``hbar omega_n / 2``.  Each mode is damped by ``exp(-lam omega_n)``; with
    ``a = lam pi c / L`` the damped sum is
    ``(pi hbar c / 2L) sum_n n e^{-a n} = (pi hbar c / 2L) (1/a^2 - 1/12 + a^2/240 - ...)``.
    The ``1/a^2`` piece grows linearly with ``L`` (bulk vacuum energy) and is
    subtracted; the remainder is Richardson-extrapolated to ``a -> 0`` in
    powers of ``a^2``.  Only the first ``cutoff_count`` modes are summed, so
    the smallest regulator is chosen such that ``exp(-a N)`` is negligible.

    Raises
    ------
    ConvergenceError
        If the cutoff is too small for the extrapolation to settle.
    """
    if not L > 0:
        raise DomainError("L must be > 0")
    n = int(cutoff_count)
    if n < 10:
        raise ConvergenceError(f"cutoff_count must be >= 10, got {cutoff_count}",
                               {"cutoff_count": cutoff_count})
    a0 = 45.0 / n
    table = [[_regulated_sum(a0 * 2.0 ** j, n) for j in range(levels)]]
    # Neville/Richardson in h = a^2: successive columns kill a^2, a^4, ...
    for col in range(1, levels):
        prev = table[-1]
        factor = 4.0 ** col
        table.append([(factor * prev[j] - prev[j + 1]) / (factor - 1.0) for j in range(len(prev) - 1)])
    best = table[-1][0]
    spread = abs(table[-1][0] - table[-2][0])
    if not abs(best) > 0 or spread > 1e-4 * abs(best):
        raise ConvergenceError("regularised mode sum did not settle; raise cutoff_count",
                               {"cutoff_count": n, "estimate": best, "spread": spread})
    return math.pi * HBAR * C / (2.0 * L) * best


__all__ = ["Cavity1D", "free_energy_1d", "force_1d", "ideal_energy_1d", "mode_sum_oracle"]
