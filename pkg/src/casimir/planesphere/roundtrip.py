"""Round-trip operator between a plane and a sphere in the multipole basis.

For an imaginary wavenumber ``K = xi / c`` the operator
``M = R_sphere T R_plane T`` is block diagonal in the azimuthal number
``m``.  Within a block it runs over ``l = max(1, m)..l_max`` and the two
polarisations M (magnetic) and N (electric).

The plane-wave integral linking the two translations is done exactly by
Gauss-Laguerre quadrature in ``x = cosh`` of the evanescent angle,
``x = 1 + t / alpha`` with ``alpha = 2 K (L + R)`` the distance from the
plane's image to the sphere centre.  At each node ``x_j`` the plane
reflects with ``r_TE``, ``r_TM`` at ``k = K sqrt(x_j^2 - 1)`` and the sphere
couples to it through

    A_l = m p_l^m / (q sqrt(l (l+1)))
    B_l = (m x p_l^m / q + sqrt((l - m)(l + m + 1)) p_l^{m+1}) / sqrt(l (l+1))

with ``q = sqrt(x^2 - 1)`` and ``p_l^m`` normalised Legendre functions.  TE
plane waves feed (M: B, N: A) and TM plane waves (M: A, N: B).  Writing
``U`` for these vectors scaled by ``sqrt(|T_l| W_j |r|)`` and
``W_j = 2 pi^2 w_j e^{-alpha} / alpha``,

    B = U diag(sign r') U^T,   M ~ diag(sigma) B,

where ``r' = (-r_TE, r_TM)`` and ``sigma`` is ``+1`` for M rows with
``T^M < 0`` and N rows with ``T^N > 0``.  ``M`` is similar to the physical
round trip, so it has the same determinant and spectrum.  For perfect or
plasma mirrors every sign is ``+1``; ``B`` is then symmetric positive
semi-definite and ``I - B`` is factorised by Cholesky.

Separations enter only through ``e^{-2 K (L + R) x}``, so ``L``-derivatives
multiply column ``j`` by ``-2 K x_j`` (first) or ``(2 K x_j)^2`` (second).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import cho_factor, cho_solve, lu_factor, lu_solve

from ..constants import C
from ..errors import DomainError, NumericalFailure
from ..reflection import fresnel_amplitudes, static_amplitudes
from .mie import check_sphere_model, mie_log_amplitudes
from .special import laguerre_rule, log_legendre_table


class MultipolePolarization(str, Enum):
    E = "E"
    M = "M"


@dataclass(frozen=True)
class SphericalMode:
    """Multipole index ``(l, m, polarisation)``."""

    ell: int
    m: int
    pol: MultipolePolarization

    def __post_init__(self):
        if self.ell < 1 or abs(self.m) > self.ell:
            raise DomainError(f"need l >= 1 and |m| <= l, got l={self.ell}, m={self.m}")
        object.__setattr__(self, "pol", MultipolePolarization(self.pol))


def block_modes(m, ell_max):
    """Mode order used inside block ``m``: all M rows, then all N rows."""
    ells = range(max(1, abs(m)), ell_max + 1)
    return [SphericalMode(ell, m, "M") for ell in ells] + [SphericalMode(ell, m, "E") for ell in ells]


def laguerre_nodes(ell_max, plane_is_perfect=True):
    """Node count making the plane-wave integral exact for perfect planes.

    Matrix elements are polynomials in ``x`` of degree at most ``2 l_max``
    (plus 2 for the second ``L``-derivative).  Material planes are smooth
    but not polynomial and get a larger rule.
    """
    n = ell_max + 2
    return n if plane_is_perfect else 2 * n + 10


@dataclass
class FrequencyData:
    """Everything shared by the azimuthal blocks at one frequency."""

    K: float
    L: float
    R: float
    ell_max: int
    x: np.ndarray
    log_q: np.ndarray
    log_legendre: np.ndarray
    log_w: np.ndarray
    col_log_te: np.ndarray
    col_sign_te: np.ndarray
    col_log_tm: np.ndarray
    col_sign_tm: np.ndarray
    log_tm: np.ndarray
    sign_tm: np.ndarray
    log_tn: np.ndarray
    sign_tn: np.ndarray
    nodes: int = 0


def _plane_perfect(plane):
    return getattr(getattr(plane, "kind", None), "value", None) == "perfect"


def frequency_data(plane, sphere, K, L, R, ell_max, static=False, n_nodes=None):
    """Precompute the Laguerre nodes, plane amplitudes, Legendre table and Mie amplitudes.

    ``static=True`` evaluates the plane at ``xi -> 0`` (Matsubara ``n = 0``)
    while ``K`` stays a small positive regulator for the sphere.
    """
    if not (K > 0 and L > 0 and R > 0):
        raise DomainError("K, L and R must be > 0")
    if ell_max < 1:
        raise DomainError("ell_max must be >= 1")
    check_sphere_model(sphere)
    n = n_nodes or laguerre_nodes(ell_max, _plane_perfect(plane))
    t, log_w = laguerre_rule(n)
    alpha = 2.0 * K * (L + R)
    x = 1.0 + t / alpha
    log_q = 0.5 * (np.log(t) + np.log(2.0 + t / alpha) - math.log(alpha))
    k = K * np.exp(log_q)
    if static:
        r_te, r_tm = static_amplitudes(plane, k)
    else:
        r_te, r_tm = fresnel_amplitudes(plane, K * C, k)
    r_te = np.broadcast_to(np.asarray(r_te, dtype=float), x.shape)
    r_tm = np.broadcast_to(np.asarray(r_tm, dtype=float), x.shape)
    log_big_w = math.log(2.0 * math.pi ** 2) + log_w - alpha - math.log(alpha)
    with np.errstate(divide="ignore"):
        col_log_te = 0.5 * (log_big_w + np.log(np.abs(r_te)))
        col_log_tm = 0.5 * (log_big_w + np.log(np.abs(r_tm)))
    log_tm, sign_tm, log_tn, sign_tn = mie_log_amplitudes(sphere, K, R, ell_max)
    table = log_legendre_table(ell_max + 1, ell_max, x, log_q)
    return FrequencyData(K, L, R, ell_max, x, log_q, table, log_w, col_log_te, np.sign(-r_te),
                         col_log_tm, np.sign(r_tm), log_tm, sign_tm, log_tn, sign_tn, n)


def _block_factors(fd, m):
    """``U`` (rows M then N, columns TE then TM), column signs and row signs for block ``m``."""
    ells = np.arange(max(1, m), fd.ell_max + 1)
    log_l2 = 0.5 * np.log(ells * (ells + 1.0))[:, None]
    lp = fd.log_legendre[m, ells]
    lp_up = fd.log_legendre[m + 1, ells] if m + 1 <= fd.ell_max + 1 else np.full_like(lp, -np.inf)
    with np.errstate(divide="ignore"):
        if m > 0:
            log_a = math.log(m) + lp - fd.log_q - log_l2
            first = math.log(m) + np.log(fd.x) + lp - fd.log_q
        else:
            log_a = np.full_like(lp, -np.inf)
            first = np.full_like(lp, -np.inf)
        second = 0.5 * np.log((ells - m) * (ells + m + 1.0))[:, None] + lp_up
    log_b = np.logaddexp(first, second) - log_l2
    row_m = 0.5 * fd.log_tm[ells - 1][:, None]
    row_n = 0.5 * fd.log_tn[ells - 1][:, None]
    te = np.vstack([row_m + log_b, row_n + log_a]) + fd.col_log_te
    tm = np.vstack([row_m + log_a, row_n + log_b]) + fd.col_log_tm
    with np.errstate(under="ignore"):
        u = np.exp(np.hstack([te, tm]))
    col_sign = np.concatenate([fd.col_sign_te, fd.col_sign_tm])
    row_sign = np.concatenate([-fd.sign_tm[ells - 1], fd.sign_tn[ells - 1]])
    return u, col_sign, row_sign


@dataclass
class RoundTripOperator:
    """One azimuthal block of the round-trip operator at one frequency.

    ``matrix`` is the operator ``diag(row_sign) sym`` in the (l, pol) basis
    listed by ``modes``; ``sym`` is the symmetric part built from the
    quadrature factors.  ``derivatives`` holds ``d sym/dL`` and
    ``d^2 sym/dL^2`` when requested.
    """

    m: int
    K: float
    modes: list
    sym: np.ndarray
    row_sign: np.ndarray
    symmetric: bool
    derivatives: tuple = ()
    diagnostics: dict = field(default_factory=dict)

    @property
    def matrix(self):
        return self.row_sign[:, None] * self.sym

    @property
    def size(self):
        return self.sym.shape[0]

    def eigenvalues(self):
        if self.symmetric:
            return np.linalg.eigvalsh(self.sym)
        return np.linalg.eigvals(self.matrix)

    def spectral_radius(self):
        return float(np.max(np.abs(self.eigenvalues()))) if self.size else 0.0

    def logdet(self):
        """``ln det(1 - M)`` by Cholesky (symmetric case) or LU."""
        return log_det_and_derivatives(self, order=0)[0]


def assemble_block(fd, m, order=0):
    """Build the block ``m`` operator from precomputed frequency data."""
    if not 0 <= m <= fd.ell_max:
        raise DomainError(f"block m={m} outside 0..{fd.ell_max}")
    u, col_sign, row_sign = _block_factors(fd, m)
    symmetric = bool(np.all(col_sign >= 0) and np.all(row_sign >= 0))
    us = u * col_sign
    sym = us @ u.T
    derivs = ()
    if order >= 1:
        grow = np.concatenate([fd.x, fd.x]) * (2.0 * fd.K)
        d1 = -(us * grow) @ u.T
        derivs = (d1,)
        if order >= 2:
            derivs = (d1, (us * grow * grow) @ u.T)
    return RoundTripOperator(m, fd.K, block_modes(m, fd.ell_max), sym, row_sign, symmetric, derivs,
                             {"nodes": fd.nodes})


def assemble_roundtrip(geom, models, xi, m, trunc, order=0, static=False):
    """Round-trip operator of block ``m`` at imaginary frequency ``xi`` (rad/s).

    Parameters
    ----------
    geom : PlaneSphereGeometry
    models : (plane, sphere) pair or a single model used for both
    xi : float
        Imaginary frequency, > 0.
    m : int
        Azimuthal number, ``0 <= m <= ell_max``.
    trunc : TruncationSpec or int
        Multipole cutoff.
    """
    if not xi > 0:
        raise DomainError("xi must be > 0")
    plane, sphere = models if isinstance(models, (tuple, list)) else (models, models)
    ell_max = trunc if isinstance(trunc, int) else trunc.resolve(geom.x)
    fd = frequency_data(plane, sphere, xi / C, geom.L, geom.R, ell_max, static=static)
    return assemble_block(fd, abs(m), order)


def _condition(a):
    with np.errstate(all="ignore"):
        return float(np.linalg.cond(a))


def log_det_and_derivatives(op, order=2):
    """``ln det(1 - M)`` and its first ``order`` derivatives with respect to ``L``.

    Uses ``d ln det = -tr(X M')`` and
    ``d^2 ln det = -tr(X M'') - tr(X M' X M')`` with ``X = (1 - M)^{-1}``.
    """
    if order > len(op.derivatives):
        raise DomainError(f"operator carries {len(op.derivatives)} L-derivatives, {order} requested; "
                          "assemble it with a higher order")
    n = op.size
    if n == 0:
        return np.zeros(order + 1)
    eye = np.eye(n)
    out = np.zeros(order + 1)
    if op.symmetric:
        try:
            fac = cho_factor(eye - op.sym, lower=True, check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure("1 - M is not positive definite",
                                   {"m": op.m, "K": op.K, "size": n, "cond": _condition(eye - op.sym)}) from exc
        out[0] = 2.0 * np.sum(np.log(np.diag(fac[0])))

        def solve(rhs):
            return cho_solve(fac, rhs, check_finite=False)
        mats = op.derivatives
    else:
        sign, logabs = np.linalg.slogdet(eye - op.matrix)
        if sign <= 0:
            raise NumericalFailure("det(1 - M) <= 0",
                                   {"m": op.m, "K": op.K, "size": n, "cond": _condition(eye - op.matrix)})
        out[0] = logabs
        lu = lu_factor(eye - op.matrix, check_finite=False)

        def solve(rhs):
            return lu_solve(lu, rhs, check_finite=False)
        mats = tuple(op.row_sign[:, None] * d for d in op.derivatives)
    if order >= 1:
        y1 = solve(mats[0])
        out[1] = -np.trace(y1)
        if order >= 2:
            out[2] = -np.trace(solve(mats[1])) - np.sum(y1 * y1.T)
    return out


def block_sum(fd, order=0, m_values=None, executor=None):
    """``sum'_m`` of ``ln det(1 - M_m)`` and derivatives (``m > 0`` blocks count twice).

    ``m_values`` fixes the evaluation order (default ascending).  Blocks may
    run on ``executor``; partial results are always added in ``m_values`` order.
    """
    ms = list(range(fd.ell_max + 1)) if m_values is None else list(m_values)

    def one(m):
        return log_det_and_derivatives(assemble_block(fd, m, order), order) * (1.0 if m == 0 else 2.0)

    parts = list(executor.map(one, ms)) if executor is not None else [one(m) for m in ms]
    total = np.zeros(order + 1)
    for p in parts:
        total = total + p
    return total


__all__ = [
    "SphericalMode", "MultipolePolarization", "RoundTripOperator", "FrequencyData", "block_modes",
    "frequency_data", "assemble_block", "assemble_roundtrip", "log_det_and_derivatives", "block_sum",
    "laguerre_nodes",
]
