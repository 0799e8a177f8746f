"""Mie amplitudes of a sphere at imaginary frequency.

Outside the sphere each multipole field is ``i_l(K r) + T_l k_l(K r)`` with
``K = xi / c``.  With ``y = K R``, ``n = sqrt(eps)``, ``z = n y`` and Riccati
log-derivatives ``D_i``, ``D_k`` at ``y`` and ``D`` of ``i_l`` at ``z``:

    T^M_l = (i_l/k_l)(y) (n D - D_i) / (D_k - n D)      (magnetic, "b")
    T^N_l = (i_l/k_l)(y) (D/n - D_i) / (D_k - D/n)      (electric, "a")

A perfect conductor is the limit ``n -> inf``:
``T^M = -i_l/k_l`` and ``T^N = -(i_l/k_l) D_i/D_k``.
Amplitudes are carried as ``(log|T|, sign T)``.
"""
from __future__ import annotations

import numpy as np

from ..constants import C
from ..errors import DomainError
from ..media import Kind, eval_epsilon
from .special import bessel_logs, riccati_log_derivative_i


def check_sphere_model(model):
    kind = getattr(model, "kind", None)
    if kind is Kind.PERFECT or (kind is Kind.PLASMA and model.interband is None):
        return
    raise DomainError("sphere must be a perfect or plasma-model mirror "
                      f"(got {getattr(model, 'name', type(model).__name__)})")


def _log_ratio_factor(num, den):
    ratio = num / den
    return np.log(np.abs(ratio)), np.sign(ratio)


def mie_log_amplitudes(model, K, R, lmax):
    """``(log|T^M|, sign T^M, log|T^N|, sign T^N)`` for ``l = 1..lmax``.

    ``K = xi / c`` in 1/m.  For the plasma model ``z = R sqrt(K^2 + omega_p^2/c^2)``
    is formed directly so that it stays finite as ``K -> 0``.
    """
    check_sphere_model(model)
    if not (K > 0 and R > 0):
        raise DomainError("K and R must be > 0")
    y = K * R
    log_i, log_k, d_i, d_k = bessel_logs(y, lmax)
    base = log_i - log_k
    if model.kind is Kind.PERFECT:
        log_tn, s_tn = _log_ratio_factor(d_i, d_k)
        return base, -np.ones(lmax), base + log_tn, -s_tn
    kp = model.omega_p / C
    z = R * np.sqrt(K * K + kp * kp)
    n = z / y
    d = riccati_log_derivative_i(z, lmax)
    log_m, s_m = _log_ratio_factor(n * d - d_i, d_k - n * d)
    log_n, s_n = _log_ratio_factor(d / n - d_i, d_k - d / n)
    return base + log_m, s_m, base + log_n, s_n


def mie_amplitudes(model, xi, ell, R):
    """Electric and magnetic amplitudes ``(a_l, b_l)`` of a sphere of radius ``R``.

    Parameters
    ----------
    model : MirrorModel
        Perfect or plasma-model sphere.
    xi : float
        Imaginary frequency in rad/s, > 0.
    ell : int or array of int
        Multipole orders, >= 1.
    R : float
        Radius in m.

    Returns
    -------
    a, b : float or ndarray
        ``a`` is the electric (``T^N``) and ``b`` the magnetic (``T^M``)
        amplitude.  Values far past ``l ~ xi R / c`` underflow to zero.
    """
    if not xi > 0:
        raise DomainError("xi must be > 0")
    ells = np.atleast_1d(np.asarray(ell, dtype=int))
    if np.any(ells < 1):
        raise DomainError("multipole order must be >= 1")
    log_m, s_m, log_n, s_n = mie_log_amplitudes(model, xi / C, R, int(ells.max()))
    idx = ells - 1
    with np.errstate(under="ignore"):
        a = s_n[idx] * np.exp(log_n[idx])
        b = s_m[idx] * np.exp(log_m[idx])
    if np.ndim(ell) == 0:
        return float(a[0]), float(b[0])
    return a, b


def epsilon_consistent_index(model, xi):
    """Refractive index ``sqrt(eps(i xi))`` from the general permittivity route (for tests)."""
    return float(np.sqrt(eval_epsilon(model, xi)))
