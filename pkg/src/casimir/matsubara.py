"""Deterministic truncated Matsubara summation.

Terms ``t_m`` for ``m >= 1`` are evaluated in batches of growing size.  The
sum stops at the first index where three consecutive terms are each below
``rel_tol * |partial sum|``, and a geometric tail estimated from the last two
terms is added.  Terms computed past the stopping index are discarded, so the
result does not depend on the batch layout or on the number of workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .constants import HBAR, K_B
from .errors import DomainError

FIRST_BATCH = 16
MAX_BATCH = 4096


def matsubara_xi(T, m):
    """Matsubara frequency ``2 pi m k_B T / hbar`` in rad/s (array ``m`` allowed)."""
    if not T > 0:
        raise DomainError("Matsubara frequencies need T > 0; use the zero-temperature path")
    m_arr = np.asarray(m)
    if np.any(m_arr < 0):
        raise DomainError("Matsubara index must be >= 0")
    out = 2.0 * math.pi * K_B * T / HBAR * m_arr
    return out if out.ndim else float(out)


def _geometric_tail(last, prev):
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(prev != 0, last / prev, 0.0)
    ok = (ratio > 0) & (ratio < 1)
    return np.where(ok, last * ratio / np.where(ok, 1 - ratio, 1.0), 0.0)


def summed(term0, err0, terms, rel_tol, m_max_cap, workers=1):
    """Sum ``0.5 * term0 + sum_{m>=1} t_m``.

    Parameters
    ----------
    term0, err0 : ndarray
        The ``m = 0`` term (already evaluated, not yet halved) and its error.
        Several observables can be summed together (1-D arrays).
    terms : callable
        ``terms(ms)`` returns ``(values, errors)`` with shape ``(len(ms), n_obs)``.
    rel_tol, m_max_cap : float, int
        Truncation policy.
    workers : int
        Batches evaluated concurrently; the reduction order is fixed.

    Returns
    -------
    total, err, n_terms, capped : ndarray, ndarray, int, bool
    """
    term0 = np.atleast_1d(np.asarray(term0, dtype=float))
    total = 0.5 * term0
    err = 0.5 * np.abs(np.atleast_1d(err0))
    history = []
    small_run = 0
    m_next = 1
    batch = FIRST_BATCH
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while m_next <= m_max_cap:
            # with several workers, evaluate `workers` batches per round
            spans = []
            start = m_next
            for _ in range(workers):
                stop = min(start + batch, m_max_cap + 1)
                if start >= stop:
                    break
                spans.append(np.arange(start, stop))
                start = stop
            if pool is not None and len(spans) > 1:
                chunks = list(pool.map(terms, spans))
            else:
                chunks = [terms(s) for s in spans]
            for ms, (vals, errs) in zip(spans, chunks):
                vals = np.asarray(vals, dtype=float).reshape(len(ms), -1)
                errs = np.asarray(errs, dtype=float).reshape(len(ms), -1)
                for i in range(len(ms)):
                    total = total + vals[i]
                    err = err + np.abs(errs[i])
                    history.append(vals[i])
                    small = np.all(np.abs(vals[i]) <= rel_tol * np.abs(total))
                    small_run = small_run + 1 if small else 0
                    if small_run >= 3:
                        tail = _geometric_tail(history[-1], history[-2])
                        err = err + np.abs(tail) + np.abs(history[-1])
                        return total + tail, err, int(ms[i]) + 1, False
            m_next = start
            batch = min(2 * batch, MAX_BATCH)
    finally:
        if pool is not None:
            pool.shutdown()
    last = history[-1] if history else total
    prev = history[-2] if len(history) > 1 else last
    tail = _geometric_tail(last, prev)
    err = err + np.abs(tail) + np.abs(last)
    return total + tail, err, len(history) + 1, True
