"""Specular reflection amplitudes of bulk mirrors at imaginary frequency.

Amplitudes follow the Lifshitz (semi-infinite local medium) model:

    r_TE = (kappa - kappa_t) / (kappa + kappa_t)
    r_TM = (eps kappa - kappa_t) / (eps kappa + kappa_t)
    kappa_t = sqrt(eps xi**2 / c**2 + k**2)

A perfect mirror has ``r_TE = -1`` and ``r_TM = +1`` so that the round-trip
product for two identical mirrors is ``+1`` in each polarisation.

Mirrors that are not described by a local permittivity can be injected
through :class:`CustomReflector`.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .constants import C
from .errors import DomainError, RangeError
from .media import Kind, eval_epsilon


class Polarization(str, Enum):
    TE = "TE"
    TM = "TM"


@dataclass(frozen=True)
class SpectralPoint:
    """One mode channel: imaginary frequency ``xi`` (rad/s), transverse ``k`` (rad/m), polarisation."""

    xi: float
    k: float
    pol: Polarization

    def __post_init__(self):
        if self.xi < 0 or self.k < 0:
            raise DomainError("xi and k must be >= 0")
        if self.xi == 0 and self.k == 0:
            raise DomainError("xi and k cannot both vanish")
        object.__setattr__(self, "pol", Polarization(self.pol))

    @property
    def kappa(self):
        return kappa(self.xi, self.k)


@dataclass(frozen=True)
class CustomReflector:
    """Mirror defined directly by its amplitudes.

    ``r(xi, k)`` must return the pair ``(r_TE, r_TM)`` (arrays allowed) for
    ``xi > 0``; ``r_static(k)`` the ``xi -> 0`` limits.  Nothing checks
    passivity beyond ``|r| <= 1`` at evaluation time.
    """

    r: Callable
    r_static: Optional[Callable] = None
    label: str = "custom"

    @property
    def name(self):
        return self.label

    def describe(self):
        return {"kind": "custom", "label": self.label}


def kappa(xi, k):
    """``sqrt(k**2 + xi**2/c**2)`` in rad/m."""
    return np.hypot(k, np.asarray(xi, dtype=float) / C)


def _check_passive(r):
    if np.any(np.abs(r) > 1.0 + 1e-12):
        raise DomainError("reflection amplitude with |r| > 1")


def fresnel_amplitudes(model, xi, k):
    """``(r_TE, r_TM)`` at ``xi > 0`` for arrays ``xi``, ``k`` (broadcast)."""
    xi = np.asarray(xi, dtype=float)
    k = np.asarray(k, dtype=float)
    if isinstance(model, CustomReflector):
        rte, rtm = model.r(xi, k)
        rte, rtm = np.asarray(rte, dtype=float), np.asarray(rtm, dtype=float)
        _check_passive(rte)
        _check_passive(rtm)
        return rte, rtm
    if model.kind is Kind.PERFECT:
        shape = np.broadcast(xi, k).shape
        return -np.ones(shape), np.ones(shape)
    eps = eval_epsilon(model, xi)
    q2 = (xi / C) ** 2
    kap = np.sqrt(k * k + q2)
    kap_t = np.sqrt(k * k + eps * q2)
    em1 = eps - 1.0
    # cancellation-free forms of the Fresnel amplitudes
    rte = -em1 * q2 / (kap + kap_t) ** 2
    rtm = em1 * ((eps + 1.0) * k * k + eps * q2) / (eps * kap + kap_t) ** 2
    # both are bounded by 1 in magnitude; rounding can overshoot by an ulp when eps is huge
    return np.maximum(rte, -1.0), np.minimum(rtm, 1.0)


def fresnel_r(model, point, *args):
    """Reflection amplitude for one :class:`SpectralPoint`.

    Also accepts ``fresnel_r(model, xi, k, pol)``.  ``xi = 0`` is routed to
    :func:`fresnel_r_static`.
    """
    if args:
        point = SpectralPoint(point, *args)
    if point.xi == 0:
        return fresnel_r_static(model, point.k, point.pol)
    rte, rtm = fresnel_amplitudes(model, point.xi, point.k)
    return float(rte if point.pol is Polarization.TE else rtm)


def static_amplitudes(model, k):
    """``(r_TE, r_TM)`` in the limit ``xi -> 0`` for arrays ``k > 0``."""
    k = np.asarray(k, dtype=float)
    if np.any(~(k > 0)):
        raise DomainError("static reflection needs k > 0")
    ones = np.ones_like(k)
    if isinstance(model, CustomReflector):
        if model.r_static is None:
            raise DomainError(f"custom reflector {model.label!r} has no static limit")
        rte, rtm = model.r_static(k)
        return np.asarray(rte, dtype=float) * ones, np.asarray(rtm, dtype=float) * ones
    if model.kind is Kind.PERFECT:
        return -ones, ones
    if not model.is_conductor:
        lo, hi = model.table.interval
        raise RangeError("static limit of a tabulated dielectric needs data at xi = 0", (lo, hi))
    if model.lossless:
        kp = model.omega_p / C
        kt = np.sqrt(k * k + kp * kp)
        rte = -kp * kp / (k + kt) ** 2
    else:
        rte = 0.0 * ones
    return rte, ones


def fresnel_r_static(model, k, pol):
    """Analytic ``xi -> 0`` limit of the amplitude for a transverse wavevector ``k > 0``.

    TM is ``+1`` for every conductor.  TE vanishes for a dissipative (Drude)
    conductor and stays finite for the lossless plasma model.
    """
    if not k > 0:
        raise DomainError(f"k must be > 0, got {k}")
    rte, rtm = static_amplitudes(model, k)
    return float(rte if Polarization(pol) is Polarization.TE else rtm)


def amplitudes(model, xi, k):
    """``(r_TE, r_TM)`` dispatching to the static limit when ``xi == 0`` (scalar xi)."""
    if xi == 0:
        return static_amplitudes(model, k)
    return fresnel_amplitudes(model, xi, k)


__all__ = [
    "Polarization", "SpectralPoint", "CustomReflector", "kappa", "fresnel_amplitudes",
    "fresnel_r", "static_amplitudes", "fresnel_r_static", "amplitudes",
]
