"""Special functions for the multipole expansion, evaluated in the log domain.

Modified spherical Bessel functions follow scipy's normalisation,
``i_0(x) = sinh(x)/x`` and ``k_0(x) = (pi/2) e^{-x}/x``.  Their values over-
or underflow long before the multipole orders we need, so only logarithms
and ratios are ever formed.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, ive, roots_laguerre

from ..errors import NumericalFailure


def _ratio_top(x, top):
    """``i_top(x) / i_{top-1}(x)``."""
    with np.errstate(under="ignore"):
        num, den = ive(top + 0.5, x), ive(top - 0.5, x)
    if den > 1e-290 and num > 0:
        return num / den
    # modified Lentz for 1/(b0 + 1/(b1 + ...)), b_j = (2(top+j)+1)/x
    f = (2 * top + 1) / x
    c, d = f, 0.0
    j = top + 1
    for _ in range(100_000):
        b = (2 * j + 1) / x
        d = 1.0 / (b + d)
        c = b + 1.0 / c
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return 1.0 / f
        j += 1
    raise NumericalFailure("continued fraction for Bessel ratio did not converge", {"x": x, "order": top})


def i_ratios(x, lmax):
    """``R_l = i_l(x) / i_{l-1}(x)`` for ``l = 1..lmax`` by downward recurrence."""
    out = np.empty(lmax + 2)
    out[lmax + 1] = _ratio_top(x, lmax + 1)
    for ell in range(lmax, 0, -1):
        out[ell] = 1.0 / ((2 * ell + 1) / x + out[ell + 1])
    return out[1:lmax + 1]


def k_ratios(x, lmax):
    """``S_l = k_l(x) / k_{l-1}(x)`` for ``l = 1..lmax`` by upward recurrence."""
    out = np.empty(lmax)
    out[0] = 1.0 + 1.0 / x
    for ell in range(1, lmax):
        out[ell] = (2 * ell + 1) / x + 1.0 / out[ell - 1]
    return out


def log_i0(x):
    if x > 1.0:
        return x - math.log(2.0 * x) + math.log1p(-math.exp(-2.0 * x))
    if x > 1e-8:
        return math.log(math.sinh(x) / x)
    return x * x / 6.0


def log_k0(x):
    return math.log(math.pi / 2.0) - x - math.log(x)


def riccati_log_derivative_i(x, lmax):
    """``(x i_l)' / (x i_l)`` for ``l = 1..lmax``."""
    ell = np.arange(1, lmax + 1)
    return 1.0 / i_ratios(x, lmax) - ell / x


def bessel_logs(x, lmax):
    """Logs and Riccati log-derivatives of ``i_l`` and ``k_l`` at ``x > 0``.

    Returns
    -------
    log_i, log_k, d_i, d_k : ndarray
        Each of length ``lmax`` for ``l = 1..lmax``.  ``d_i > 0`` and ``d_k < 0``.
    """
    if not x > 0:
        raise ValueError("x must be > 0")
    r = i_ratios(x, lmax)
    s = k_ratios(x, lmax)
    ell = np.arange(1, lmax + 1)
    log_i = log_i0(x) + np.cumsum(np.log(r))
    log_k = log_k0(x) + np.cumsum(np.log(s))
    return log_i, log_k, 1.0 / r - ell / x, -1.0 / s - ell / x


def log_legendre_table(m_max, lmax, x, log_q=None):
    """Logs of normalised associated Legendre functions for ``x >= 1``.

    ``p_l^m(x) = N_lm (x^2 - 1)^{m/2} d^m P_l / dx^m`` with
    ``N_lm = sqrt((2l+1)(l-m)! / (4 pi (l+m)!))``, no Condon-Shortley phase.
    All values are positive for ``x > 1``.  ``log_q``, the log of
    ``sqrt(x^2 - 1)``, can be passed when ``x - 1`` is known more precisely
    than ``x`` itself.

    Returns
    -------
    ndarray, shape ``(m_max + 1, lmax + 1, len(x))``
        ``-inf`` where ``l < m``.
    """
    x = np.asarray(x, dtype=float)
    nx = x.size
    out = np.full((m_max + 1, lmax + 1, nx), -np.inf)
    m_all = np.arange(m_max + 1)
    if log_q is None:
        log_q = 0.5 * np.log((x - 1.0) * (x + 1.0))
    seed_c = (0.5 * np.log((2 * m_all + 1) / (4 * math.pi)) + 0.5 * gammaln(2 * m_all + 1)
              - m_all * math.log(2.0) - gammaln(m_all + 1))
    seeds = seed_c[:, None] + m_all[:, None] * log_q[None, :]
    cur = np.zeros((m_max + 1, nx))
    prev = np.zeros((m_max + 1, nx))
    scale = np.zeros((m_max + 1, nx))
    for ell in range(lmax + 1):
        if ell <= m_max:
            cur[ell] = 1.0
            prev[ell] = 0.0
            scale[ell] = seeds[ell]
            out[ell, ell] = seeds[ell]
        if ell + 1 > lmax:
            break
        top = min(ell, m_max) + 1
        ms = m_all[:top]
        den = (ell + 1.0 - ms) * (ell + 1.0 + ms)
        a = np.sqrt((2 * ell + 1.0) * (2 * ell + 3.0) / den)
        b = np.zeros(top)
        lower = ms < ell
        b[lower] = np.sqrt((2 * ell + 3.0) * (ell - ms[lower]) * (ell + ms[lower])
                           / ((2 * ell - 1.0) * den[lower]))
        nxt = a[:, None] * x[None, :] * cur[:top] - b[:, None] * prev[:top]
        prev[:top] = cur[:top]
        cur[:top] = nxt
        big = nxt > 1e100
        if np.any(big):
            f = np.where(big, nxt, 1.0)
            cur[:top] /= f
            prev[:top] /= f
            scale[:top] += np.log(f)
        out[:top, ell + 1] = np.log(cur[:top]) + scale[:top]
    return out


@lru_cache(maxsize=64)
def laguerre_rule(n):
    """Gauss-Laguerre nodes and log-weights (weights may underflow; logs do not)."""
    t, w = roots_laguerre(n)
    with np.errstate(divide="ignore"):
        log_w = np.log(w)
    return t, log_w
