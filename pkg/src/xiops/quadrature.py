"""Batched tanh-sinh quadrature on finite intervals.

Every integral in the package is reduced to a finite window in the log
coordinate ``x = ln t`` (or a finite interval in a linear variable) and
handed to :func:`tanh_sinh`.  The rule doubles the node density per level
and reuses all previous nodes, so the difference between consecutive levels
is a cheap and conservative error estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["QuadratureError", "QuadResult", "tanh_sinh", "find_window"]

# Beyond |u| = 3.5 the weights fall below 1e-20 of the interval length.
_U_MAX = 3.5


class QuadratureError(RuntimeError):
    """Raised when an adaptive rule cannot reach the requested accuracy."""


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray
    error: np.ndarray
    level: int


def _nodes(h: float, odd_only: bool):
    kmax = int(np.ceil(_U_MAX / h))
    if odd_only:
        k = np.arange(1, kmax + 1, 2)
        u = np.concatenate([-k[::-1], k]) * h
    else:
        k = np.arange(0, kmax + 1)
        u = np.concatenate([-k[:0:-1], k]) * h
    v = 0.5 * np.pi * np.sinh(u)
    # sigma = 1/(1+exp(-2v)); evaluate the side that avoids cancellation
    e = np.exp(-2.0 * np.abs(v))
    tail = e / (1.0 + e)  # distance of sigma from the nearer endpoint
    w = np.pi * np.cosh(u) * tail * (1.0 - tail) * h
    return u, tail, w


def tanh_sinh(
    fun: Callable[[np.ndarray, np.ndarray], np.ndarray],
    a,
    b,
    rtol: float = 1e-13,
    atol: float = 0.0,
    min_level: int = 3,
    max_level: int = 12,
    raise_on_fail: bool = False,
    noise: float = 0.0,
) -> QuadResult:
    """Integrate a batch of integrands over ``[a_j, b_j]``.

    Parameters
    ----------
    fun
        ``fun(x, idx)`` receives nodes ``x`` of shape ``(n, len(idx))`` for the
        still-active batch columns ``idx`` and returns an array of shape
        ``(n, len(idx), ...)``.
    a, b
        Interval endpoints, scalars or 1-d arrays of equal length.
    rtol, atol
        Convergence is declared per column once the level-to-level change is
        below ``max(atol, rtol * |value|)``.
    noise
        Additional floor ``noise * int |f|``; lets integrals that cancel to
        near zero converge at the rounding level of their summands.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    a, b = np.broadcast_arrays(a, b)
    m = a.shape[0]
    width = b - a

    def evaluate(h, odd_only, idx):
        u, tail, w = _nodes(h, odd_only)
        lo = (u < 0)[:, None]
        aw, bw = a[idx][None, :], b[idx][None, :]
        x = np.where(lo, aw + tail[:, None] * (bw - aw), bw - tail[:, None] * (bw - aw))
        vals = np.asarray(fun(x, idx))
        wx = w[:, None] * (bw - aw)
        wx = wx.reshape(wx.shape + (1,) * (vals.ndim - 2))
        return np.sum(wx * vals, axis=0), np.sum(np.abs(wx * vals), axis=0)

    h = 0.5
    idx = np.arange(m)
    partial, l1 = evaluate(h, False, idx)
    value = partial.copy()
    error = np.full(value.shape, np.inf, dtype=float)
    active = np.ones(m, dtype=bool)
    level = 0
    for level in range(1, max_level + 1):
        h *= 0.5
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        extra, extra_l1 = evaluate(h, True, idx)
        new = 0.5 * partial[idx] + extra
        l1[idx] = 0.5 * l1[idx] + extra_l1
        diff = np.abs(new - partial[idx])
        partial[idx] = new
        value[idx] = new
        error[idx] = diff
        if level >= min_level:
            bound = np.maximum(np.maximum(atol, rtol * np.abs(new)), noise * l1[idx])
            ok = diff <= bound
            ok = ok.reshape(ok.shape[0], -1).all(axis=1)
            active[idx[ok]] = False
    if active.any() and raise_on_fail:
        worst = float(np.max(error[active]))
        raise QuadratureError(f"tanh-sinh did not converge (estimated error {worst:.3g})")
    value = np.where(width.reshape(width.shape + (1,) * (value.ndim - 1)) == 0, 0.0, value)
    return QuadResult(value=value, error=error, level=level)


def find_window(
    magnitude: Callable[[float], float],
    start: float = 0.0,
    rate_left: float | None = None,
    rate_right: float | None = None,
    rel_tol: float = 1e-19,
    step: float = 1.0,
    cap: float = 350.0,
) -> tuple[float, float, float]:
    """Locate a finite window outside of which an integrand is negligible.

    ``magnitude(x)`` returns a bound on the integrand size near ``x``.  The
    walk proceeds outward in steps until the magnitude, divided by the known
    exponential decay rate of the tail (if any), drops below
    ``rel_tol`` times the largest magnitude seen.

    Returns ``(x_lo, x_hi, tail_estimate)``.
    """
    peak = max(magnitude(start), 1e-300)
    ends = []
    tails = []
    for direction, rate in ((-1.0, rate_left), (1.0, rate_right)):
        x = start
        last = magnitude(x)
        below = 0
        while True:
            x += direction * step
            if abs(x) > cap:
                x = direction * cap
                tails.append(last / max(rate or 1.0, 1e-3))
                break
            mag = magnitude(x)
            if not np.isfinite(mag):
                raise QuadratureError(f"integrand not finite at log-coordinate {x:.3g}")
            peak = max(peak, mag)
            tail = mag / rate if rate and np.isfinite(rate) and rate > 0 else mag
            if tail <= rel_tol * peak:
                below += 1
                if below >= 2:
                    tails.append(tail)
                    break
            else:
                below = 0
            last = mag
        ends.append(x)
    return ends[0], ends[1], float(max(tails))
