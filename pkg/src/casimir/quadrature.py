"""Vectorised adaptive quadrature over half-lines."""
from __future__ import annotations

import numpy as np
from scipy.integrate import cubature

from .errors import NumericalFailure

# first slab of the half-line; integrands decay at least like e^{-u}
S_FIRST = 40.0
S_LIMIT = 40.0 * 2 ** 6


def log1p_ratio(x):
    """``log1p(-x) / x`` with the ``x -> 0`` limit ``-1``."""
    safe = np.where(np.abs(x) > 1e-8, x, 0.5)
    return np.where(np.abs(x) > 1e-8, np.log1p(-safe) / safe, -1.0 - 0.5 * x)


def integrate_half_line(fun, rel_tol, policy, lower=(), upper=()):
    """Integrate ``fun`` with its last variable running over ``[0, inf)``.

    Leading variables run over the fixed box ``lower``..``upper``.  The last
    one is integrated by slabs ``[0, S]``, ``[S, 2S]``, ... until a slab adds
    less than ``rel_tol`` of the running total.  ``fun`` takes points of shape
    ``(n, ndim)`` and returns ``(n, ...)``.
    """
    ndim = len(lower) + 1
    max_sub = max(1, policy.quad_max_nodes // 21 ** ndim)
    total = err = 0.0
    neval = 0
    lo, hi = 0.0, S_FIRST
    while True:
        counted = [0]

        def counting(x):
            counted[0] += len(x)
            return fun(x)

        res = cubature(counting, [*lower, lo], [*upper, hi], rule="gk21", rtol=rel_tol, atol=0.0,
                       max_subdivisions=max_sub)
        neval += counted[0]
        if res.status != "converged":
            raise NumericalFailure("adaptive quadrature did not converge",
                                   {"interval": (lo, hi), "nodes_used": neval, "status": res.status})
        total = total + res.estimate
        err = err + res.error
        if lo > 0 and np.all(np.abs(res.estimate) <= rel_tol * np.abs(total)):
            break
        if hi >= S_LIMIT:
            break
        lo, hi = hi, 2.0 * hi
    return np.asarray(total), np.asarray(err), neval
