"""Summation/quadrature policy and the result container returned by the engines."""
from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field

from .errors import DomainError, TruncationWarning


@dataclass(frozen=True)
class SummationPolicy:
    """Truncation of the Matsubara sum and of the wavevector/frequency integrals.

    rel_tol
        Matsubara terms are dropped once three consecutive terms are each
        below ``rel_tol`` times the partial sum.
    m_max_cap
        Hard cap on the Matsubara index; reaching it flags the result.
    quad_rel_tol
        Relative tolerance handed to the adaptive quadratures.
    quad_max_nodes
        Upper bound on integrand evaluations per adaptive integral.
    workers
        Thread count for independent work units (Matsubara batches,
        frequency nodes).  Results do not depend on it.
    """

    rel_tol: float = 1e-8
    m_max_cap: int = 10 ** 6
    quad_rel_tol: float = 1e-9
    quad_max_nodes: int = 20_000_000
    workers: int = 1

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if not 0 < self.quad_rel_tol < 1:
            raise DomainError(f"quad_rel_tol must lie in (0, 1), got {self.quad_rel_tol}")
        if self.m_max_cap < 1 or self.quad_max_nodes < 441 or self.workers < 1:
            raise DomainError("caps and worker count must be positive")

    def tightened(self, factor=0.5):
        """Same policy with every tolerance multiplied by ``factor``."""
        return SummationPolicy(self.rel_tol * factor, self.m_max_cap, self.quad_rel_tol * factor,
                               self.quad_max_nodes, self.workers)

    def as_dict(self):
        return asdict(self)


@dataclass
class EvalResult:
    """A computed observable with its numerical error estimate.

    ``value`` is in J (energy), Pa (pressure), N (force) or N/m (gradient);
    ``err_estimate`` has the same unit.  ``diagnostics`` always contains
    ``terms_used``, ``nodes_used`` and ``truncation_reached``.
    """

    value: float
    err_estimate: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.value = float(self.value)
        self.err_estimate = abs(float(self.err_estimate))
        self.diagnostics.setdefault("terms_used", 0)
        self.diagnostics.setdefault("nodes_used", 0)
        self.diagnostics.setdefault("truncation_reached", False)
        if self.diagnostics["truncation_reached"] and not self.diagnostics.get("_warned"):
            self.diagnostics["_warned"] = True
            warnings.warn(f"truncation cap reached: {self.diagnostics.get('reason', '')}",
                          TruncationWarning, stacklevel=3)

    @property
    def rel_err(self):
        return self.err_estimate / abs(self.value) if self.value else float("inf")

    @property
    def truncated(self):
        return bool(self.diagnostics["truncation_reached"])

    def scaled(self, factor, **extra):
        """Result multiplied by a constant, diagnostics carried over."""
        diag = dict(self.diagnostics, **extra)
        return EvalResult(self.value * factor, self.err_estimate * abs(factor), diag)

    def __float__(self):
        return self.value
