"""Plane-sphere free energy, force gradient and the ratio to the proximity approximation.

The free energy is the trace-log of the round trip summed over frequencies,

    T = 0:  E = hbar c / (2 pi) int_0^inf dK sum'_m ln det(1 - M_m(K))
    T > 0:  E = k_B T sum'_n sum'_m ln det(1 - M_m(K_n)),  K_n = 2 pi n k_B T / (hbar c)

with ``sum'_m`` counting ``m > 0`` twice and ``sum'_n`` halving ``n = 0``.
The force is ``-dE/dL`` and the gradient ``G = -d^2E/dL^2`` (positive for
attraction).  Both derivatives are exact derivatives of the integrand.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad_vec

from ..constants import C, HBAR, K_B
from ..errors import DomainError, FitError, NumericalFailure
from ..matsubara import summed
from ..pfa import PlaneSphereGeometry, pfa_gradient
from ..results import EvalResult, SummationPolicy
from .mie import check_sphere_model
from .roundtrip import block_sum, frequency_data

# dimensionless upper limit of K L; the integrand decays like e^{-2 K L}
KL_MAX = 30.0
# K (L + R) used for the static Matsubara term; corrections are O(regulator^2)
STATIC_REGULATOR = 1e-6

DEFAULT_PS_POLICY = SummationPolicy(rel_tol=1e-9, quad_rel_tol=1e-8)


@dataclass(frozen=True)
class TruncationSpec:
    """Multipole cutoff.

    ell_max
        Fixed cutoff; when ``None`` it is ``max(min_ell, ceil(C / x))``.
    auto
        Double the cutoff until the free energy changes by less than
        ``target_rel`` or ``cap`` is reached.
    C
        Constant of the validity bound ``x >= C / ell_max``.
    """

    ell_max: Optional[int] = None
    auto: bool = True
    target_rel: float = 1e-4
    C: float = 5.0
    cap: int = 400
    min_ell: int = 10

    def __post_init__(self):
        if self.ell_max is not None and self.ell_max < 1:
            raise DomainError("ell_max must be >= 1")
        if not 0 < self.target_rel < 1:
            raise DomainError("target_rel must lie in (0, 1)")
        if self.cap < 1 or self.C <= 0:
            raise DomainError("cap and C must be positive")

    def resolve(self, x):
        """Starting cutoff for aspect ratio ``x``."""
        if self.ell_max is not None:
            return int(self.ell_max)
        return int(min(self.cap, max(self.min_ell, math.ceil(self.C / x))))

    def x_min(self, ell_max):
        return self.C / ell_max

    def is_valid(self, x, ell_max):
        return x >= self.x_min(ell_max) * (1.0 - 1e-12)


@dataclass
class PlaneSphereResult:
    """Energy (J), force (N) and gradient (N/m) at one geometry.

    ``ell_max`` is the cutoff used, ``converged`` whether the automatic
    doubling met its target and ``valid`` whether ``x >= C / ell_max``.
    """

    energy: EvalResult
    force: EvalResult
    gradient: EvalResult
    ell_max: int
    valid: bool
    converged: bool
    history: list = field(default_factory=list)


def _models(models):
    plane, sphere = models if isinstance(models, (tuple, list)) else (models, models)
    check_sphere_model(sphere)
    return plane, sphere


def _executor(policy):
    return ThreadPoolExecutor(policy.workers) if policy.workers > 1 else None


def _stack_at(plane, sphere, R, Ls, ell_max, K, order, static, pool):
    """``[ln det, d/dL, d^2/dL^2]`` block sums for each separation in ``Ls`` at one ``K``."""
    out = np.empty((len(Ls), order + 1))
    for i, L in enumerate(Ls):
        fd = frequency_data(plane, sphere, K, L, R, ell_max, static=static)
        out[i] = block_sum(fd, order, executor=pool)
    return out


def spectral_sums(geom, models, T, ell_max, policy=DEFAULT_PS_POLICY, order=2, offsets=(0.0,)):
    """Free energy and its first ``order`` ``L``-derivatives at ``L + offsets``.

    All separations share the same frequency nodes, so finite differences
    between them are free of quadrature noise.

    Returns
    -------
    values, errors : ndarray, shape ``(len(offsets), order + 1)``
        SI units: J, J/m, J/m^2.
    diagnostics : dict
    """
    plane, sphere = _models(models)
    L0, R = geom.L, geom.R
    Ls = [L0 + d for d in offsets]
    if min(Ls) <= 0:
        raise DomainError("stencil reaches a non-positive separation")
    powers = L0 ** np.arange(order + 1)
    pool = _executor(policy)
    counter = [0]
    try:
        if T == 0:
            def integrand(s):
                counter[0] += 1
                return _stack_at(plane, sphere, R, Ls, ell_max, s / L0, order, False, pool) * powers

            res, err, info = quad_vec(integrand, 0.0, KL_MAX, epsrel=policy.quad_rel_tol, epsabs=0.0,
                                      norm="max", full_output=True)
            if not info.success:
                raise NumericalFailure("frequency quadrature did not converge",
                                       {"status": info.status, "evaluations": counter[0]})
            scale = HBAR * C / (2.0 * math.pi * L0) / powers
            values = res * scale
            errors = np.abs(err * scale) * np.ones_like(values)
            diag = {"terms_used": 0, "nodes_used": counter[0], "truncation_reached": False}
        else:
            k_unit = 2.0 * math.pi * K_B * T / (HBAR * C)
            kt = K_B * T
            shape = (len(Ls), order + 1)
            k_static = STATIC_REGULATOR / (L0 + R)
            term0 = _stack_at(plane, sphere, R, Ls, ell_max, k_static, order, True, pool) * kt

            def terms(ns):
                vals = np.stack([_stack_at(plane, sphere, R, Ls, ell_max, n * k_unit, order, False, pool)
                                 .ravel() * kt for n in ns])
                counter[0] += len(ns)
                return vals, 1e-13 * np.abs(vals)

            total, err, n_terms, capped = summed(term0.ravel(), 1e-13 * np.abs(term0.ravel()), terms,
                                                 policy.rel_tol, policy.m_max_cap, 1)
            values = total.reshape(shape)
            errors = (err + policy.rel_tol * np.abs(total)).reshape(shape)
            diag = {"terms_used": n_terms, "nodes_used": counter[0], "truncation_reached": capped}
    finally:
        if pool is not None:
            pool.shutdown()
    return values, errors, diag


def _result_from(values, errors, diag, ell_max, valid, converged, history, trunc_err=None):
    trunc_err = np.zeros(3) if trunc_err is None else trunc_err
    extra = dict(diag, ell_max=ell_max, valid=valid, converged=converged)
    energy = EvalResult(values[0], errors[0] + trunc_err[0], dict(extra))
    force = EvalResult(-values[1], errors[1] + trunc_err[1], dict(extra, _warned=True))
    grad = EvalResult(-values[2], errors[2] + trunc_err[2], dict(extra, _warned=True))
    return PlaneSphereResult(energy, force, grad, ell_max, valid, converged, history)


def evaluate_planesphere(geom, models, T=0.0, trunc=TruncationSpec(), policy=DEFAULT_PS_POLICY):
    """Energy, force and gradient with the automatic multipole cutoff.

    The reported error includes the change from the last doubling of
    ``ell_max`` when ``trunc.auto`` is set.  Not reaching ``target_rel``
    before ``trunc.cap`` sets ``truncation_reached`` (and warns).
    """
    if not T >= 0:
        raise DomainError("T must be >= 0")
    ell = trunc.resolve(geom.x)
    vals, errs, diag = spectral_sums(geom, models, T, ell, policy)
    history = [(ell, vals[0, 0])]
    converged = not trunc.auto
    trunc_err = np.zeros(3)
    while trunc.auto:
        nxt = min(2 * ell, trunc.cap)
        if nxt <= ell:
            break
        v2, e2, d2 = spectral_sums(geom, models, T, nxt, policy)
        history.append((nxt, v2[0, 0]))
        trunc_err = np.abs(v2[0] - vals[0])
        vals, errs, diag, ell = v2, e2, d2, nxt
        if trunc_err[0] <= trunc.target_rel * abs(vals[0, 0]):
            converged = True
            break
    diag = dict(diag)
    if trunc.auto and not converged:
        diag["truncation_reached"] = True
        diag["reason"] = f"ell_max cap {trunc.cap} reached before target_rel {trunc.target_rel}"
    valid = trunc.is_valid(geom.x, ell)
    return _result_from(vals[0], errs[0], diag, ell, valid, converged, history, trunc_err)


def free_energy_planesphere(geom, models, T=0.0, trunc=TruncationSpec(), policy=DEFAULT_PS_POLICY):
    """Plane-sphere free energy (J); diagnostics carry ``ell_max``, ``valid`` and ``converged``."""
    return evaluate_planesphere(geom, models, T, trunc, policy).energy


@dataclass
class RhoG:
    """Gradient ratio ``G / G_PFA`` with its ingredients."""

    value: float
    G: float
    G_pfa: float
    x: float
    ell_max: int
    valid: bool
    converged: bool
    err_estimate: float
    method: str
    flags: dict = field(default_factory=dict)

    def __float__(self):
        return self.value


FD_STEP = 1e-3


def gradient(geom, models, T=0.0, ell_max=20, policy=DEFAULT_PS_POLICY, method="analytic"):
    """Force gradient ``-d^2E/dL^2`` (N/m) at fixed cutoff.

    method
        ``"analytic"``: exact second derivative of the integrand.
        ``"mixed"``: analytic force, then a 5-point central difference with
        step ``1e-3 L``.  ``"fd5"``: 5-point second difference of the energy.

    Returns
    -------
    value, err_estimate, noise_flag
    """
    h = FD_STEP * geom.L
    if method == "analytic":
        vals, errs, _ = spectral_sums(geom, models, T, ell_max, policy, order=2)
        return -vals[0, 2], errs[0, 2], False
    offsets = (-2 * h, -h, h, 2 * h) if method == "mixed" else (-2 * h, -h, 0.0, h, 2 * h)
    order = 1 if method == "mixed" else 0
    vals, errs, _ = spectral_sums(geom, models, T, ell_max, policy, order=order, offsets=offsets)
    if method == "mixed":
        force = -vals[:, 1]
        g = (force[0] - 8 * force[1] + 8 * force[2] - force[3]) / (12 * h)
        noise = float(np.sum(errs[:, 1] * np.array([1, 8, 8, 1]))) / (12 * h)
    elif method == "fd5":
        e = vals[:, 0]
        g = -(-e[0] + 16 * e[1] - 30 * e[2] + 16 * e[3] - e[4]) / (12 * h * h)
        noise = float(np.sum(errs[:, 0] * np.array([1, 16, 30, 16, 1]))) / (12 * h * h)
    else:
        raise DomainError(f"unknown gradient method {method!r}")
    # quadrature errors are correlated across the stencil; the bound is pessimistic
    return g, noise, noise > 1e-3 * abs(g)


def rho_G(geom, models, T=0.0, trunc=TruncationSpec(), policy=DEFAULT_PS_POLICY, method="analytic"):
    """``G / G_PFA`` for the plane-sphere geometry.

    The cutoff is chosen by ``trunc`` (automatic doubling on the free
    energy); the gradient is then taken by ``method`` at that cutoff and
    divided by ``2 pi R |P_pp(L)|``.
    """
    res = evaluate_planesphere(geom, models, T, trunc, policy)
    plane, sphere = _models(models)
    flags = {}
    if method == "analytic":
        g, g_err = res.gradient.value, res.gradient.err_estimate
    else:
        g, g_err, noisy = gradient(geom, models, T, res.ell_max, policy, method)
        flags["fd_noise"] = noisy
    gp = pfa_gradient(geom, (plane, sphere), T)
    value = g / gp.value
    err = abs(value) * (g_err / abs(g) + gp.err_estimate / gp.value)
    return RhoG(value, g, gp.value, geom.x, res.ell_max, res.valid, res.converged, err, method, flags)


def beta_G_fit(samples, weights=None):
    """Slope of ``rho_G = 1 + beta x + c x^2`` by weighted least squares.

    Parameters
    ----------
    samples : sequence
        ``(x, rho)`` pairs, :class:`RhoG` objects, or ``(x, rho, valid)``
        triples.  At least three distinct ``x``, all valid.
    weights : sequence, optional
        Per-sample weights ``1/sigma^2``; default uniform.

    Returns
    -------
    beta, stderr : float
        ``stderr`` is from the weighted residual variance (zero for exact data).
    """
    xs, ys = [], []
    for s in samples:
        if isinstance(s, RhoG):
            x, y, valid = s.x, s.value, s.valid
        else:
            x, y = s[0], s[1]
            valid = s[2] if len(s) > 2 else True
        if not valid:
            raise FitError(f"sample at x={x} is flagged invalid")
        xs.append(float(x))
        ys.append(float(y))
    x = np.array(xs)
    y = np.array(ys) - 1.0
    if len(x) < 3 or len(np.unique(x)) < 3:
        raise FitError("need at least three distinct x values")
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != x.shape or np.any(w <= 0):
        raise FitError("weights must be positive, one per sample")
    design = np.column_stack([x, x * x]) * np.sqrt(w)[:, None]
    target = y * np.sqrt(w)
    if np.linalg.cond(design) > 1e12:
        raise FitError("degenerate design matrix")
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    resid = target - design @ coef
    dof = len(x) - 2
    sigma2 = float(resid @ resid) / dof if dof > 0 else 0.0
    cov = sigma2 * np.linalg.inv(design.T @ design)
    return float(coef[0]), float(math.sqrt(max(cov[0, 0], 0.0)))


EXPERIMENTAL_BETA_BOUND = 0.4


def within_experimental_bound(beta, bound=EXPERIMENTAL_BETA_BOUND):
    """True when ``|beta| < bound``, the published experimental constraint on the slope."""
    return abs(beta) < bound


def aspect_geometry(x, R=1e-6):
    return PlaneSphereGeometry(R, x * R)


__all__ = [
    "TruncationSpec", "PlaneSphereResult", "RhoG", "spectral_sums", "evaluate_planesphere",
    "free_energy_planesphere", "gradient", "rho_G", "beta_G_fit", "within_experimental_bound",
    "aspect_geometry", "DEFAULT_PS_POLICY",
]
