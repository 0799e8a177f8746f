"""Dielectric response of mirrors at imaginary frequencies.

The metallic response is split into a regular interband part and the
conduction-electron part,

    eps(i xi) = eps_hat(i xi) + sigma(i xi) / xi,   sigma(i xi) = omega_p**2 / (xi + gamma),

with ``gamma = 0`` giving the lossless plasma model.  Tabulated data are
interpolated log-log on ``eps - 1``.

The module also carries a few zero-point/thermal helpers (Planck occupation,
mean energy per mode, cutoff vacuum energy density, characteristic lengths).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from .constants import C, GOLD_GAMMA, GOLD_OMEGA_P, HBAR, K_B
from .errors import DomainError, RangeError


class Kind(str, Enum):
    PERFECT = "perfect"
    PLASMA = "plasma"
    DRUDE = "drude"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class EpsilonTable:
    """Samples ``(xi_i, eps_i)`` of a dielectric function on the imaginary axis.

    ``xi`` is in rad/s and strictly increasing, ``eps >= 1``.
    """

    xi: np.ndarray
    eps: np.ndarray
    source: str = ""

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        eps = np.asarray(self.eps, dtype=float)
        if xi.ndim != 1 or xi.shape != eps.shape:
            raise DomainError("xi and eps must be 1-D arrays of equal length")
        if xi.size < 2:
            raise DomainError("an epsilon table needs at least 2 samples")
        if np.any(xi < 0) or not np.all(np.isfinite(xi)):
            raise DomainError("table xi must be finite and >= 0")
        if np.any(np.diff(xi) <= 0):
            raise DomainError("table xi must be strictly increasing")
        if np.any(eps < 1) or not np.all(np.isfinite(eps)):
            raise DomainError("table eps must be finite and >= 1")
        xi.setflags(write=False)
        eps.setflags(write=False)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eps", eps)
        # log-log interpolation needs xi > 0 and eps > 1 at every node
        object.__setattr__(self, "_loglog", bool(xi[0] > 0 and np.all(eps > 1)))

    @property
    def interval(self):
        return float(self.xi[0]), float(self.xi[-1])

    @classmethod
    def from_csv(cls, path):
        """Read a ``xi_rad_per_s,epsilon`` CSV file; ``#`` lines are comments."""
        path = Path(path)
        rows = []
        with path.open(newline="") as fh:
            lines = (ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#"))
            reader = csv.reader(lines)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["xi_rad_per_s", "epsilon"]:
                raise DomainError(f"{path}: expected header 'xi_rad_per_s,epsilon', got {header}")
            for lineno, row in enumerate(reader, start=2):
                if len(row) != 2:
                    raise DomainError(f"{path}: row {lineno} must have 2 columns")
                rows.append((float(row[0]), float(row[1])))
        if not rows:
            raise DomainError(f"{path}: no data rows")
        arr = np.array(rows)
        return cls(arr[:, 0], arr[:, 1], source=str(path))

    def to_csv(self, path):
        with Path(path).open("w", newline="") as fh:
            fh.write("xi_rad_per_s,epsilon\n")
            for x, e in zip(self.xi, self.eps):
                fh.write(f"{x:.17g},{e:.17g}\n")

    @classmethod
    def sample(cls, model, xi_min, xi_max, per_decade=50):
        """Tabulate ``model`` on a log grid with ``per_decade`` nodes per decade."""
        n = max(2, int(math.ceil(per_decade * math.log10(xi_max / xi_min))) + 1)
        xi = np.logspace(math.log10(xi_min), math.log10(xi_max), n)
        return cls(xi, eval_epsilon(model, xi), source=f"sampled:{model.kind.value}")

    def __call__(self, xi):
        return eval_epsilon_tabulated(self, xi)


def eval_epsilon_tabulated(table, xi):
    """Interpolate a table at ``xi`` (scalar or array), exact at the nodes.

    Interpolation is linear in ``(log xi, log(eps - 1))``.  Points outside
    ``[xi_1, xi_N]`` raise :class:`RangeError` carrying the valid interval.
    """
    x = np.asarray(xi, dtype=float)
    lo, hi = table.interval
    if np.any(x < lo) or np.any(x > hi):
        raise RangeError(f"xi outside tabulated interval [{lo:.6g}, {hi:.6g}] rad/s", (lo, hi))
    if table._loglog:
        y = np.exp(np.interp(np.log(x), np.log(table.xi), np.log(table.eps - 1.0)))
        # np.interp is exact only up to rounding of exp(log(.)); restore nodes
        idx = np.searchsorted(table.xi, x)
        idx = np.clip(idx, 0, table.xi.size - 1)
        on_node = table.xi[idx] == x
        out = np.where(on_node, table.eps[idx], 1.0 + y)
    else:
        lx = np.log(np.maximum(x, np.finfo(float).tiny))
        lt = np.log(np.maximum(table.xi, np.finfo(float).tiny))
        out = np.interp(lx, lt, table.eps)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class MirrorModel:
    """Optical response of one mirror at imaginary frequencies.

    Use the constructors :meth:`perfect`, :meth:`plasma`, :meth:`drude` and
    :meth:`tabulated` rather than the raw initialiser.

    For ``TABULATED`` mirrors the table holds the full ``eps`` unless a Drude
    tail (``omega_p``, ``gamma``) is given; then the table is read as the
    interband part and the conduction term ``sigma/xi`` is added analytically.
    """

    kind: Kind
    omega_p: Optional[float] = None
    gamma: float = 0.0
    interband: Optional[EpsilonTable] = None
    table: Optional[EpsilonTable] = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (Kind.PLASMA, Kind.DRUDE) or (kind is Kind.TABULATED and self.omega_p is not None):
            if self.omega_p is None or not self.omega_p > 0 or not math.isfinite(self.omega_p):
                raise DomainError(f"omega_p must be > 0, got {self.omega_p}")
        if not self.gamma >= 0 or not math.isfinite(self.gamma):
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if kind is Kind.PLASMA and self.gamma != 0:
            raise DomainError("plasma model has gamma = 0; use MirrorModel.drude")
        if kind is Kind.TABULATED and self.table is None:
            raise DomainError("tabulated mirror needs a table")

    @classmethod
    def perfect(cls):
        return cls(Kind.PERFECT, label="perfect")

    @classmethod
    def plasma(cls, omega_p=GOLD_OMEGA_P, interband=None):
        return cls(Kind.PLASMA, omega_p=float(omega_p), interband=interband, label="plasma")

    @classmethod
    def drude(cls, omega_p=GOLD_OMEGA_P, gamma=GOLD_GAMMA, interband=None):
        return cls(Kind.DRUDE, omega_p=float(omega_p), gamma=float(gamma), interband=interband,
                   label="drude")

    @classmethod
    def tabulated(cls, table, omega_p=None, gamma=0.0):
        return cls(Kind.TABULATED, omega_p=omega_p, gamma=float(gamma), table=table,
                   label="tabulated")

    @property
    def is_conductor(self):
        """True when sigma(i xi)/xi diverges as xi -> 0."""
        return self.kind in (Kind.PERFECT, Kind.PLASMA, Kind.DRUDE) or self.omega_p is not None

    @property
    def lossless(self):
        """True for a plasma-like conductor (no relaxation)."""
        return self.kind is Kind.PLASMA or (self.is_conductor and self.gamma == 0)

    @property
    def name(self):
        return self.label or self.kind.value

    def describe(self):
        """Plain-dict description for metadata sidecars."""
        d = {"kind": self.kind.value}
        if self.omega_p is not None:
            d["omega_p_rad_per_s"] = self.omega_p
        if self.kind in (Kind.DRUDE, Kind.TABULATED):
            d["gamma_rad_per_s"] = self.gamma
        if self.interband is not None:
            d["interband"] = self.interband.source or "table"
        if self.table is not None:
            d["table"] = self.table.source or "table"
        return d


def _interband(model, xi):
    tab = model.interband
    if tab is None:
        return 1.0
    lo, hi = tab.interval
    # eps_hat is regular at xi -> 0 and saturates above the table
    return eval_epsilon_tabulated(tab, np.clip(xi, lo, hi))


def eval_epsilon(model, xi):
    """Dielectric function ``eps(i xi)`` for ``xi > 0`` (scalar or array).

    Perfect mirrors have no finite permittivity and raise :class:`DomainError`.
    """
    x = np.asarray(xi, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("eval_epsilon needs xi > 0; use the static limits for xi = 0")
    kind = model.kind
    if kind is Kind.PERFECT:
        raise DomainError("a perfect mirror has no finite permittivity")
    if kind is Kind.TABULATED:
        tab = model.table
        lo, hi = tab.interval
        if model.omega_p is None:
            if np.any(x < lo):
                raise RangeError(
                    f"xi below first tabulated sample {lo:.6g} rad/s; supply a Drude tail", (lo, hi))
            out = eval_epsilon_tabulated(tab, np.minimum(x, hi))
        else:
            eps_hat = eval_epsilon_tabulated(tab, np.clip(x, lo, hi))
            out = eps_hat + model.omega_p ** 2 / (x * (x + model.gamma))
    else:
        out = _interband(model, x) + model.omega_p ** 2 / (x * (x + model.gamma))
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def conductivity(model, xi):
    """Reduced conductivity ``sigma(i xi) = omega_p**2 / (xi + gamma)`` in rad/s."""
    if model.omega_p is None:
        raise DomainError(f"{model.kind.value} mirror has no conduction term")
    return model.omega_p ** 2 / (np.asarray(xi, dtype=float) + model.gamma)


def mean_occupation(omega, T):
    """Planck mean photon number per mode, ``1/(exp(hbar omega / k_B T) - 1)``."""
    if not omega > 0:
        raise DomainError(f"omega must be > 0, got {omega}")
    if T < 0:
        raise DomainError(f"T must be >= 0, got {T}")
    if T == 0:
        return 0.0
    return 1.0 / math.expm1(HBAR * omega / (K_B * T))


def mean_energy_per_mode(omega, T):
    """Mean energy per mode including the zero-point term, ``(n + 1/2) hbar omega``."""
    return (mean_occupation(omega, T) + 0.5) * HBAR * omega


def vacuum_energy_density_cutoff(omega_max):
    """Zero-point energy density up to ``omega_max``: ``(hbar w)**4 / (8 pi**2 (hbar c)**3)`` in J/m^3."""
    if omega_max < 0:
        raise DomainError(f"omega_max must be >= 0, got {omega_max}")
    return (HBAR * omega_max) ** 4 / (8.0 * math.pi ** 2 * (HBAR * C) ** 3)


def plasma_wavelength(omega_p):
    """``lambda_P = 2 pi c / omega_p`` in metres."""
    if not omega_p > 0:
        raise DomainError(f"omega_p must be > 0, got {omega_p}")
    return 2.0 * math.pi * C / omega_p


def omega_p_from_wavelength(lambda_p):
    """Inverse of :func:`plasma_wavelength`."""
    if not lambda_p > 0:
        raise DomainError(f"lambda_p must be > 0, got {lambda_p}")
    return 2.0 * math.pi * C / lambda_p


def thermal_wavelength(T):
    """``lambda_T = hbar c / (k_B T)`` in metres."""
    if not T > 0:
        raise DomainError(f"T must be > 0, got {T}")
    return HBAR * C / (K_B * T)


def gold(model="drude", gamma=GOLD_GAMMA):
    """Gold mirror with the default plasma frequency (136 nm plasma wavelength)."""
    if model == "plasma":
        return MirrorModel.plasma(GOLD_OMEGA_P)
    if model == "drude":
        return MirrorModel.drude(GOLD_OMEGA_P, gamma)
    raise DomainError(f"unknown gold model {model!r}")
