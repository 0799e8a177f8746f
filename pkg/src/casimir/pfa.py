"""Proximity force approximation for a sphere in front of a plane.

The sphere-plane force is ``2 pi R`` times the plane-plane free energy per
area at the closest separation, and its gradient is ``2 pi R |P_pp|``.  A
slower route sums the plane-plane pressure over the local gaps of the
sphere's surface and is kept for comparison.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constants import C, HBAR
from .errors import DomainError
from .lifshitz import PlanePlaneProblem, evaluate
from .results import EvalResult, SummationPolicy

PFA_ADVISORY_X = 0.1

# experimental geometries, radius and separation range in metres
PURDUE = {"R": 150e-6, "L_min": 0.16e-6, "L_max": 0.75e-6}
YALE = {"R": 156e-3, "L_min": 0.7e-6, "L_max": 7e-6}


@dataclass(frozen=True)
class PlaneSphereGeometry:
    """Sphere of radius ``R`` at closest separation ``L`` from a plane (metres)."""

    R: float
    L: float

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"R must be > 0, got {self.R}")
        if not self.L > 0:
            raise DomainError(f"L must be > 0, got {self.L}")

    @classmethod
    def from_aspect(cls, x, R):
        return cls(R, x * R)

    @property
    def x(self):
        """Aspect ratio ``L / R``."""
        return self.L / self.R

    @property
    def pfa_advisory(self):
        """True when ``x`` exceeds 0.1, where the approximation is not trustworthy."""
        return self.x > PFA_ADVISORY_X


def _pair(mirrors):
    if isinstance(mirrors, (tuple, list)):
        if len(mirrors) != 2:
            raise DomainError("mirrors must be one model or a pair")
        return tuple(mirrors)
    return mirrors, mirrors


def _plane(geom, mirrors, T, L=None):
    m1, m2 = _pair(mirrors)
    return PlanePlaneProblem(m1, m2, geom.L if L is None else L, 1.0, T)


def pfa_force(geom, mirrors, T=0.0, policy=SummationPolicy(), method="energy"):
    """Sphere-plane force (N) in the proximity approximation; negative means attraction.

    Parameters
    ----------
    geom : PlaneSphereGeometry
    mirrors : MirrorModel or (plane, sphere) pair
    T : float
        Temperature in K.
    method : {"energy", "local"}
        ``"energy"`` uses ``F = 2 pi R E_pp/A``.  ``"local"`` integrates the
        plane-plane pressure over the local gaps ``h`` of the sphere,
        ``F = 2 pi int_L^{L+R} (L + R - h) P_pp(h) dh``.
    """
    if method == "energy":
        e = evaluate(_plane(geom, mirrors, T), policy).free_energy
        return e.scaled(2.0 * math.pi * geom.R)
    if method == "local":
        return _local_force(geom, mirrors, T, policy)
    raise DomainError(f"unknown method {method!r}")


def pfa_gradient(geom, mirrors, T=0.0, policy=SummationPolicy()):
    """``2 pi R |P_pp(L)|`` in N/m, the proximity-approximation force gradient."""
    p = evaluate(_plane(geom, mirrors, T), policy).pressure
    out = p.scaled(2.0 * math.pi * geom.R)
    out.value = abs(out.value)
    return out


def _local_force(geom, mirrors, T, policy, nodes=64):
    # h = L / y maps the gaps onto y in [L/(L+R), 1]; P(h) h^4 is slowly varying
    L, R = geom.L, geom.R
    y_lo = L / (L + R)
    t, w = np.polynomial.legendre.leggauss(nodes)
    y = y_lo + (1.0 - y_lo) * (t + 1.0) / 2.0
    w = w * (1.0 - y_lo) / 2.0
    h = L / y

    def press(hh):
        return evaluate(_plane(geom, mirrors, T, L=hh), policy).pressure

    if policy.workers > 1:
        with ThreadPoolExecutor(policy.workers) as pool:
            results = list(pool.map(press, h))
    else:
        results = [press(hh) for hh in h]
    p = np.array([r.value for r in results])
    perr = np.array([r.err_estimate for r in results])
    jac = w * L / y ** 2 * (L + R - h) * 2.0 * math.pi
    value = float(np.sum(jac * p))
    err = float(np.sum(np.abs(jac) * perr))
    diag = {"terms_used": max(r.diagnostics["terms_used"] for r in results),
            "nodes_used": sum(r.diagnostics["nodes_used"] for r in results),
            "truncation_reached": any(r.truncated for r in results), "pfa_nodes": nodes}
    return EvalResult(value, err, diag)


def pfa_energy_ideal(geom):
    """Perfect mirrors at ``T = 0``: ``-hbar c pi^3 R / (720 L^2)``."""
    return -HBAR * C * math.pi ** 3 * geom.R / (720.0 * geom.L ** 2)


def pfa_force_ideal(geom):
    """Perfect mirrors at ``T = 0``: ``-2 pi R hbar c pi^2 / (720 L^3)``."""
    return -2.0 * math.pi * geom.R * HBAR * C * math.pi ** 2 / (720.0 * geom.L ** 3)


def pfa_gradient_ideal(geom):
    """Perfect mirrors at ``T = 0``: ``2 pi R hbar c pi^2 / (240 L^4)``."""
    return 2.0 * math.pi * geom.R * HBAR * C * math.pi ** 2 / (240.0 * geom.L ** 4)


def normalize_bracket(a, b):
    """Return an interval as ``(low, high)`` whatever order it was written in."""
    return (a, b) if a <= b else (b, a)


def aspect_ratio_range(R, L_min, L_max):
    """Ascending ``(x_min, x_max)`` covered by a separation range at radius ``R``."""
    lo, hi = normalize_bracket(L_min, L_max)
    if not (R > 0 and lo > 0):
        raise DomainError("R and separations must be > 0")
    return lo / R, hi / R


def gradient_sweep(R, L_values, mirrors, T=0.0, policy=SummationPolicy()):
    """PFA gradients (N/m) at each separation, in input order."""
    def one(L):
        return pfa_gradient(PlaneSphereGeometry(R, L), mirrors, T, policy).value

    if policy.workers > 1:
        with ThreadPoolExecutor(policy.workers) as pool:
            return np.array(list(pool.map(one, L_values)))
    return np.array([one(L) for L in L_values])


__all__ = [
    "PlaneSphereGeometry", "pfa_force", "pfa_gradient", "pfa_energy_ideal", "pfa_force_ideal",
    "pfa_gradient_ideal", "normalize_bracket", "aspect_ratio_range", "gradient_sweep",
    "PURDUE", "YALE",
]
