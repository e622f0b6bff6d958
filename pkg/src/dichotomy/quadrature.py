"""Batched adaptive Gauss-Legendre quadrature, in log or linear domain.

Many independent 1-D integrals are refined together, breadth first, so each
round is a handful of numpy operations.  Every cell is compared against its
two halves; the halves are kept once the difference is small relative to the
cell itself or to its width-share of the running problem total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import QuadratureNonconvergence

ORDER = 10
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(ORDER)
_LOG_WEIGHTS = np.log(_WEIGHTS)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_depth: int = 40
    log_domain: bool = False

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


DEFAULT_SPEC = QuadratureSpec()

# func(problem_ids, points) -> log integrand (log mode) or integrand (linear)
Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _logsumexp_rows(x: np.ndarray) -> np.ndarray:
    top = np.max(x, axis=1)
    safe = np.where(np.isfinite(top), top, 0.0)
    with np.errstate(under="ignore"):
        out = safe + np.log(np.sum(np.exp(x - safe[:, None]), axis=1))
    return np.where(np.isneginf(top), -np.inf, np.where(np.isposinf(top), np.inf, out))


def _rule(func, pid, a, b, log_domain):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    pts = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(func(np.repeat(pid, ORDER), pts.ravel()), dtype=float)
    vals = vals.reshape(pts.shape)
    if log_domain:
        with np.errstate(divide="ignore"):
            return _logsumexp_rows(vals + _LOG_WEIGHTS[None, :]) + np.log(half)
    return half * np.sum(vals * _WEIGHTS[None, :], axis=1)


_NOISE = 16 * np.finfo(float).eps


def _group_total(values, pid, n, log_domain):
    if log_domain:
        out = np.full(n, -np.inf)
        np.logaddexp.at(out, pid, values)
        return out
    out = np.zeros(n)
    np.add.at(out, pid, values)
    return out


def integrate_many(
    func: Integrand,
    breaks: Sequence[Sequence[float]],
    spec: QuadratureSpec = DEFAULT_SPEC,
    log_domain: bool | None = None,
    initial_split: int = 2,
) -> np.ndarray:
    """Integrate problem ``i`` over the sorted breakpoint list ``breaks[i]``.

    Returns log-integrals in log mode, plain integrals in linear mode.
    Integrands are assumed nonnegative.
    """
    if log_domain is None:
        log_domain = spec.log_domain
    n = len(breaks)
    empty = -np.inf if log_domain else 0.0
    if n == 0:
        return np.zeros(0)

    pid_list, a_list, b_list = [], [], []
    widths = np.zeros(n)
    for i, pts in enumerate(breaks):
        pts = np.unique(np.asarray(pts, dtype=float))
        if pts.size < 2:
            continue
        widths[i] = pts[-1] - pts[0]
        for lo, hi in zip(pts[:-1], pts[1:]):
            edges = np.linspace(lo, hi, initial_split + 1)
            pid_list.extend([i] * initial_split)
            a_list.extend(edges[:-1])
            b_list.extend(edges[1:])
    pid = np.asarray(pid_list, dtype=np.int64)
    a = np.asarray(a_list, dtype=float)
    b = np.asarray(b_list, dtype=float)

    accepted = np.full(n, empty)
    whole = _rule(func, pid, a, b, log_domain) if pid.size else np.zeros(0)
    depth = 0
    while pid.size:
        mid = 0.5 * (a + b)
        left = _rule(func, pid, a, mid, log_domain)
        right = _rule(func, pid, mid, b, log_domain)
        if log_domain:
            halves = np.logaddexp(left, right)
            hi = np.maximum(whole, halves)
            lo = np.minimum(whole, halves)
            with np.errstate(invalid="ignore", divide="ignore"):
                err = np.where(
                    np.isneginf(hi), -np.inf, hi + np.log(-np.expm1(lo - hi))
                )
            err = np.where(np.isposinf(hi), np.inf, err)
            running = np.logaddexp(accepted, _group_total(halves, pid, n, True))
            share = np.log((b - a) / widths[pid])
            with np.errstate(divide="ignore", invalid="ignore"):
                # log-integrand values near |L| carry ~|L|*eps rounding noise
                noise = np.log(_NOISE * np.maximum(1.0, np.abs(halves))) + halves
            tol = np.maximum.reduce([
                math.log(spec.rel_tol) + halves,
                math.log(spec.rel_tol) + running[pid] + share,
                math.log(spec.abs_tol) + share,
                noise,
            ])
            with np.errstate(invalid="ignore"):
                ok = (err <= tol) | (np.isneginf(halves) & np.isneginf(whole))
        else:
            halves = left + right
            if not np.all(np.isfinite(halves)):
                raise QuadratureNonconvergence("non-finite integrand in linear-domain quadrature")
            err = np.abs(whole - halves)
            running = accepted + _group_total(halves, pid, n, False)
            share = (b - a) / widths[pid]
            tol = np.maximum.reduce([
                spec.rel_tol * np.abs(halves),
                spec.rel_tol * np.abs(running[pid]) * share,
                spec.abs_tol * share,
            ])
            ok = err <= tol
        accepted = (
            np.logaddexp(accepted, _group_total(halves[ok], pid[ok], n, True))
            if log_domain
            else accepted + _group_total(halves[ok], pid[ok], n, False)
        )
        keep = ~ok
        if not np.any(keep):
            break
        depth += 1
        if depth >= spec.max_depth:
            raise QuadratureNonconvergence(
                f"{int(keep.sum())} cells unresolved after max_depth={spec.max_depth}"
            )
        pid, a, b, mid = pid[keep], a[keep], b[keep], mid[keep]
        whole = np.concatenate([left[keep], right[keep]])
        pid = np.concatenate([pid, pid])
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
    return accepted


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    breaks: Sequence[float],
    spec: QuadratureSpec = DEFAULT_SPEC,
    log_domain: bool | None = None,
) -> float:
    """Single-problem convenience wrapper around :func:`integrate_many`."""
    return float(
        integrate_many(lambda _pid, x: func(x), [breaks], spec, log_domain)[0]
    )
