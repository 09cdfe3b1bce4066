"""Theta-type series with exact polynomial coefficients.

``ExpPolySeries(P)`` stands for ``sum_{n>=1} P(pi n^2 t) exp(-pi n^2 t)``.
On a single term ``D = t d/dt`` acts as ``P -> y P' - y P``, so every
polynomial in ``D`` applied to the series is again such a series, with
rational coefficients computed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from . import _poly
from ._poly import ONE, Poly
from .funcspace import (
    INF,
    AnalyticFunction,
    CapabilityError,
    LinComb,
    PowerLog,
    PowerSubst,
    PolyD,
)

__all__ = [
    "DomainError",
    "CapabilityError",
    "ExpPolySeries",
    "PSI",
    "ThetaSeriesFn",
    "psi",
    "theta",
    "apply_H",
    "apply_Delta",
    "iteration_closed_form",
    "synthetic_funci1",
    "powerlog_H_power",
    "MAX_DELTA_POWER",
]

MAX_DELTA_POWER = 8

_PI_DIGITS = "3.14159265358979323846264338327950288419716939937510582097494459"


class DomainError(ValueError):
    """Argument outside the domain of the function."""


def _d_on_poly(P: Poly) -> Poly:
    """Action of ``t d/dt`` on ``P(y) e^{-y}``: ``y P' - y P``."""
    deriv = tuple(i * P[i] for i in range(1, len(P)))
    return _poly.add(_poly.shift_x(deriv, 1), _poly.scale(_poly.shift_x(P, 1), -1))


def _apply_D_poly(Q: Poly, P: Poly) -> Poly:
    """``Q(D)`` acting on the coefficient polynomial ``P``."""
    out = _poly.ZERO
    cur = P
    for q in Q:
        if q != 0:
            out = _poly.add(out, _poly.scale(cur, q))
        cur = _d_on_poly(cur)
    return out


@dataclass(frozen=True)
class ExpPolySeries:
    """``sum_{n>=1} P(pi n^2 t) exp(-pi n^2 t)`` with exact rational ``P``.

    ``history`` is the polynomial in ``D`` that produced the series from
    ``Psi`` when known; it fixes the behaviour at ``t -> 0``.
    """

    poly: Poly = ONE
    history: Poly | None = ONE

    def __post_init__(self):
        object.__setattr__(self, "poly", _poly.trim(tuple(Fraction(c) for c in self.poly)))

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def coefficients(self) -> list[Fraction]:
        return list(self.poly)

    # -- truncation ----------------------------------------------------
    def truncation(self, t: float, eps: float) -> int:
        """Smallest ``N`` whose geometric tail bound is below ``eps``.

        Uses ``|P(y)| <= A max(1, y^d)`` and the ratio of consecutive bound
        terms, which is below one once ``y`` passes the polynomial peak.
        """
        if t <= 0:
            raise DomainError("t must be positive")
        A = float(sum(abs(c) for c in self.poly)) or 1.0
        d = max(self.degree, 0)
        n = 1
        while True:
            y = math.pi * n * n * t
            ynext = math.pi * (n + 1) ** 2 * t
            # bound on terms n+1, n+2, ...: first term times 1/(1-r)
            log_term = math.log(A) + d * max(0.0, math.log(ynext)) - ynext
            r = ((n + 2) / (n + 1)) ** (2 * d) * math.exp(-math.pi * t * (2 * n + 3))
            if ynext > d and r < 1:
                if log_term - math.log(1 - r) <= math.log(eps):
                    return n
            n += 1
            if n > 10**7:
                raise DomainError("truncation exceeded 1e7 terms")

    # -- evaluation ----------------------------------------------------
    def __call__(self, t, eps: float = 1e-17) -> np.ndarray:
        """Float evaluation with certified truncation (absolute tail <= eps)."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise DomainError("series evaluated at t <= 0")
        flat = t.ravel()
        out = np.zeros(flat.shape)
        if flat.size == 0:
            return out.reshape(t.shape)
        coeffs = np.array([float(c) for c in self.poly]) if self.poly else np.zeros(1)
        order = np.argsort(flat)
        # group by truncation length to avoid O(N_max * size) work for large t
        for lo in range(0, flat.size, 512):
            idx = order[lo : lo + 512]
            tt = flat[idx]
            N = self.truncation(float(tt.min()), eps)
            n = np.arange(1, N + 1, dtype=float)[:, None]
            y = np.pi * n * n * tt[None, :]
            live = y < 760.0  # beyond this exp(-y) is exactly zero in float64
            terms = np.zeros_like(y)
            with np.errstate(under="ignore"):
                terms[live] = np.polynomial.polynomial.polyval(y[live], coeffs) * np.exp(-y[live])
            out[idx] = terms.sum(axis=0)
        return out.reshape(t.shape)

    def evaluate_long(self, t, eps: float = 1e-17) -> np.ndarray:
        """Float evaluation carried out in ``np.longdouble``.

        High ``Delta`` powers have large alternating coefficients; the extra
        three digits keep integrals of these kernels at double accuracy.
        """
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise DomainError("series evaluated at t <= 0")
        flat = t.ravel()
        out = np.zeros(flat.shape)
        if flat.size == 0:
            return out.reshape(t.shape)
        coeffs = [np.longdouble(c.numerator) / np.longdouble(c.denominator) for c in self.poly] or [np.longdouble(0)]
        pi = np.longdouble(_PI_DIGITS[:40])
        tt = flat.astype(np.longdouble)
        N = self.truncation(float(flat.min()), eps)
        acc = np.zeros(flat.shape, dtype=np.longdouble)
        for n in range(1, N + 1):
            y = pi * (n * n) * tt
            p = np.zeros_like(y)
            for c in reversed(coeffs):
                p = p * y + c
            with np.errstate(under="ignore", over="ignore", invalid="ignore"):
                acc += np.where(y < 11400, p * np.exp(-y), 0)
        return acc.astype(float).reshape(t.shape)

    def evaluate_extended(self, t: float, digits: int = 40) -> Decimal:
        """Evaluate at a single ``t`` with 40-digit decimal arithmetic.

        Needed where individual terms are much larger than the sum, e.g.
        ``H_4 Delta_4^n Psi(1)`` with ``n >= 4`` where float64 loses 9 digits.
        """
        if t <= 0:
            raise DomainError("t must be positive")
        with localcontext() as ctx:
            ctx.prec = digits + 10
            pi = Decimal(_PI_DIGITS)
            tt = Decimal(float(t))
            coeffs = [Decimal(c.numerator) / Decimal(c.denominator) for c in self.poly]
            eps = Decimal(10) ** (-(digits + 5))
            total = Decimal(0)
            n = 1
            while True:
                y = pi * n * n * tt
                acc = Decimal(0)
                for c in reversed(coeffs):
                    acc = acc * y + c
                term = acc * (-y).exp()
                total += term
                if y > 2 * max(self.degree, 1) and abs(term) < eps * max(abs(total), Decimal(1)):
                    break
                n += 1
            return +total

    # -- operators ------------------------------------------------------
    def apply_poly_D(self, Q: Poly) -> "ExpPolySeries":
        hist = None if self.history is None else _poly.mul(self.history, Q)
        return ExpPolySeries(_apply_D_poly(tuple(Fraction(_poly.exact(q)) for q in Q), self.poly), hist)

    def as_function(self) -> "ThetaSeriesFn":
        return ThetaSeriesFn(self)


PSI = ExpPolySeries(ONE)


def apply_H(series: ExpPolySeries, alpha) -> ExpPolySeries:
    """``H_alpha`` on a series: ``P + alpha (y P' - y P)``."""
    return series.apply_poly_D(_poly.from_operator(alpha=Fraction(alpha)))


def apply_Delta(series: ExpPolySeries, alpha, n: int = 1, max_power: int = MAX_DELTA_POWER) -> ExpPolySeries:
    """``Delta_alpha^n`` on a series, exact."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > max_power:
        raise CapabilityError(f"Delta power {n} exceeds the configured maximum {max_power}")
    return series.apply_poly_D(_poly.power(_poly.from_operator(delta=Fraction(alpha)), n))


def psi(t, eps: float = 1e-17):
    """``Psi(t) = sum_{n>=1} exp(-pi n^2 t)`` with absolute error at most ``eps``."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError("psi needs t > 0")
    val = PSI(t_arr, eps)
    return float(val) if np.ndim(t) == 0 else val


def theta(t, eps: float = 1e-17):
    """``Theta(t) = 1 + 2 Psi(t)``."""
    val = psi(t, eps / 2)
    return 1.0 + 2.0 * val


class ThetaSeriesFn(AnalyticFunction):
    """An :class:`ExpPolySeries` viewed as an :class:`AnalyticFunction`.

    The behaviour at 0 follows from ``Psi(t) = t^{-1/2}/2 - 1/2 + O(t^inf)``:
    a history polynomial ``Q`` gives ``Q(-1/2) t^{-1/2}/2 - Q(0)/2``.
    """

    order_inf = INF

    def __init__(self, series: ExpPolySeries):
        self.series = series
        Q = series.history
        if Q is None:
            self.order0 = None
        elif _poly.evaluate(Q, Fraction(-1, 2)) != 0:
            self.order0 = -0.5
        elif _poly.evaluate(Q, Fraction(0)) != 0:
            self.order0 = 0.0
        else:
            self.order0 = INF

    def _jets(self, t, K, P):
        out = np.empty((K + 1,) + t.shape, dtype=complex)
        hist = self.series.history
        small = t < 1
        for k in range(K + 1):
            Qk = _poly.shift_x(tuple(P), k)
            if hist is None or not small.any():
                out[k] = self.series.apply_poly_D(Qk)(t)
                continue
            # t < 1: use Psi(t) = t^{-1/2} Psi(1/t) + t^{-1/2}/2 - 1/2 under Q(D)
            total = _poly.mul(hist, Qk)
            vals = np.empty(t.shape)
            big = ~small
            if big.any():
                vals[big] = self.series.apply_poly_D(Qk)(t[big])
            ts = t[small]
            mirrored = PSI.apply_poly_D(_poly.affine(total, Fraction(-1, 2), -1))
            c_half = float(_poly.evaluate(total, Fraction(-1, 2)))
            c_zero = float(_poly.evaluate(total, Fraction(0)))
            vals[small] = ts**-0.5 * (mirrored(1 / ts) + c_half / 2) - c_zero / 2
            out[k] = vals
        return out


def kernel(alpha=4, delta_power: int = 0, with_H: bool = False) -> ThetaSeriesFn:
    """Convenience: ``(H_alpha)^{with_H} Delta_alpha^n Psi`` as a function."""
    s = apply_Delta(PSI, alpha, delta_power)
    if with_H:
        s = apply_H(s, alpha)
    return s.as_function()


# ---------------------------------------------------------------------------
# closed forms for iterated operators


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def iteration_closed_form(n: int, m: int, alpha, C: float, which: str, sign: int) -> float:
    """Value at ``t = 1`` of ``Delta_alpha^n Psi^{sign}`` or of ``H_alpha`` of it.

    ``Psi^{sign}`` solves the twisted functional equation
    ``Psi(t) = sign (-1)^m t^{-2/alpha} Psi(1/t) + C ln^m t [t^{-2/alpha} - sign]/2``.
    Only one of the two values at ``t = 1`` is forced by that equation;
    requesting the other raises ``ValueError``.

    ``which`` is ``"psi"`` or ``"Hpsi"``.  For the ``-`` branch the value
    returned is the one the functional equation actually forces; see the
    decisions ledger for the relation to the ``+`` branch.
    """
    if which not in ("psi", "Hpsi"):
        raise ValueError("which must be 'psi' or 'Hpsi'")
    sign = 1 if sign >= 0 else -1
    a = Fraction(alpha) if not isinstance(alpha, float) else Fraction(alpha).limit_denominator(10**9)
    pref = -Fraction(C) * a**m / 2 * Fraction(2) ** (2 * n - m) * math.factorial(m)
    odd_form = pref * _binom(n, 2 * n - m)
    even_form = pref * (_binom(n + 1, 2 * n - m + 1) + _binom(n, 2 * n - m + 1))
    odd_m = m % 2 == 1
    if sign > 0:
        if odd_m and which == "psi":
            return float(odd_form)
        if not odd_m and which == "Hpsi":
            return float(even_form)
    else:
        if not odd_m and which == "psi":
            return float(-odd_form)
        if odd_m and which == "Hpsi":
            return float(-even_form)
    raise ValueError(f"{which}(1) is not determined for m={m}, sign={'+' if sign > 0 else '-'}")


def synthetic_funci1(m: int, alpha, C: float, sign: int, seed: AnalyticFunction | None) -> AnalyticFunction:
    """Build a solution of the twisted functional equation.

    The result is ``g(t) + e t^{-2/alpha} g(1/t) + a ln^m t + b t^{-2/alpha} ln^m t``
    with ``e = sign (-1)^m``, ``(a, b) = (-C/4, C/4)`` for ``sign = +`` and
    ``(C/4, C/4)`` for ``sign = -``.
    """
    sign = 1 if sign >= 0 else -1
    a_exact = Fraction(alpha)
    c = -2 / a_exact
    e = sign * (-1) ** m
    Cq = _poly.exact(C)
    a, b = (-Cq / 4, Cq / 4) if sign > 0 else (Cq / 4, Cq / 4)
    terms = [(a, PowerLog(1.0, 0, m)), (b, PowerLog(1.0, c, m))]
    if seed is not None:
        terms = [(1, seed), (e, PowerSubst(seed, c=c, beta=1.0, mu=-1))] + terms
    return LinComb(terms)


def funci1_residual(f: AnalyticFunction, m: int, alpha, C: float, sign: int, t) -> np.ndarray:
    """Pointwise residual of the twisted functional equation."""
    t = np.asarray(t, dtype=float)
    sign = 1 if sign >= 0 else -1
    p = 2.0 / float(alpha)
    lhs = f(t)
    rhs = sign * (-1) ** m * t ** (-p) * f(1 / t) + C * np.log(t) ** m * (t ** (-p) - sign) / 2
    return np.abs(lhs - rhs)


def powerlog_H_power(alpha, m: int, k: int, sigma=None) -> dict[int, Fraction]:
    """Exact ``H_alpha^m`` on ``t^sigma ln^k t`` as ``{power of ln: coefficient}``.

    With the default ``sigma = -1/alpha`` the only surviving term is
    ``m! C(k, m) alpha^m ln^{k-m} t``.
    """
    a = Fraction(alpha)
    s = -1 / a if sigma is None else Fraction(sigma)
    terms = {k: Fraction(1)}
    for _ in range(m):
        nxt: dict[int, Fraction] = {}
        for j, c in terms.items():
            # H(t^s L^j) = (1 + a s) t^s L^j + a j t^s L^{j-1}
            if 1 + a * s != 0:
                nxt[j] = nxt.get(j, 0) + c * (1 + a * s)
            if j > 0:
                nxt[j - 1] = nxt.get(j - 1, 0) + c * a * j
        terms = {j: c for j, c in nxt.items() if c != 0}
    return terms
