"""Test functions on the positive half-line and log-coordinate grids.

A function is a node in a small expression tree.  Every node can return its
*jets*: the stack ``D^k P(D) f`` for ``k = 0..K`` where ``D = t d/dt`` and
``P`` is a polynomial in ``D``.  Leaves know their jets in closed form, and
combinators push ``P`` towards the leaves so that exact annihilations
(``(1 + a D) t**(-1/a) = 0``) survive composition.

Decay is tracked by two orders:

``order0``
    ``|f(t)| = O(t**order0)`` as ``t -> 0``.
``order_inf``
    ``|f(t)| = O(t**-order_inf)`` as ``t -> inf``.

``math.inf`` means rapid decay, ``None`` means no certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

import numpy as np

from . import _poly
from ._poly import ONE, Poly

__all__ = [
    "AnalyticFunction",
    "CapabilityError",
    "DecayCertificateError",
    "SamplingError",
    "PowExp",
    "LogGaussian",
    "PowerLog",
    "Bump",
    "CallableFunction",
    "PolyD",
    "PowerSubst",
    "Product",
    "LinComb",
    "Conj",
    "LogGrid",
    "GridFunction",
    "sample",
    "interpolate",
    "project_phi",
    "project_tau",
    "tau",
    "dilate",
    "battery",
    "decay_kind",
    "verify_decay",
    "log_extent",
    "H",
    "Delta",
    "zero_function",
]

INF = math.inf


class CapabilityError(RuntimeError):
    """An operation needs a derivative order the function cannot provide."""


class DecayCertificateError(ValueError):
    """A declared decay order is contradicted by spot evaluation."""


class SamplingError(RuntimeError):
    """Evaluation produced NaN or overflow at a grid node."""


def decay_kind(order: float | None) -> str:
    """Map a decay order to the descriptive enum ``rapid | power(s) | none``."""
    if order is None:
        return "none"
    if order == INF:
        return "rapid"
    return f"power({order:g})"


def _min_order(*orders):
    if any(o is None for o in orders):
        return None
    return min(orders)


def _sum_order(a, b):
    if a is None or b is None:
        return None
    return a + b


class AnalyticFunction:
    """Base class for functions on ``(0, inf)``.

    Subclasses implement :meth:`_jets`.  ``exact_jets`` tells whether those
    jets come from a closed-form rule or from finite differences.
    """

    order0: float | None = None
    order_inf: float | None = None
    support: tuple[float, float] | None = None
    exact_jets: bool = True
    # exponents e with f ~ c t**e at 0 that a polynomial in D may annihilate
    removable0: tuple = ()
    order0_regular: float | None = None

    # -- evaluation -----------------------------------------------------
    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.jets(t, 0)[0]

    def jets(self, t, K: int = 0, P: Poly = ONE) -> np.ndarray:
        """Return ``D^k P(D) f`` at ``t`` for ``k = 0..K``.

        The result has shape ``(K + 1,) + t.shape`` and complex dtype.
        """
        t = np.asarray(t, dtype=float)
        if not P:
            return np.zeros((K + 1,) + t.shape, dtype=complex)
        sup = self.support
        if sup is not None and t.size > 16:
            inside = (t >= sup[0]) & (t <= sup[1])
            if not inside.all():
                out = np.zeros((K + 1,) + t.shape, dtype=complex)
                if inside.any():
                    out[:, inside] = self._jets(t[inside], K, tuple(P))
                return out
        return self._jets(t, K, tuple(P))

    def _jets(self, t, K, P):  # pragma: no cover - abstract
        raise NotImplementedError

    def deriv(self, t):
        """Exact ``d/dt`` derivative when available."""
        t = np.asarray(t, dtype=float)
        return self.jets(t, 1)[1] / t

    # -- decay ----------------------------------------------------------
    @property
    def decay_at_0(self) -> str:
        return decay_kind(self.order0)

    @property
    def decay_at_inf(self) -> str:
        return decay_kind(self.order_inf)

    def at_zero(self) -> complex:
        """Limit ``f(0+)`` (used by the general continuation)."""
        if self.order0 is not None and self.order0 > 0:
            return 0j
        return complex(self(np.array([1e-30]))[0])

    def tail_moment(self, U: np.ndarray, a: float):
        """Closed form of ``int_U^inf u**(a-1) f(u) du`` when known, else None."""
        return None

    # -- algebra sugar --------------------------------------------------
    def __add__(self, other):
        return LinComb([(1, self), (1, other)])

    def __sub__(self, other):
        return LinComb([(1, self), (-1, other)])

    def __mul__(self, other):
        if isinstance(other, AnalyticFunction):
            return Product(self, other)
        return LinComb([(other, self)])

    __rmul__ = __mul__

    def __neg__(self):
        return LinComb([(-1, self)])


# ---------------------------------------------------------------------------
# finite-difference fallback


_FD_STEP = 1e-4


def _fd_jets(value: Callable[[np.ndarray], np.ndarray], t, order: int) -> list:
    """Plain jets ``D^i f`` for ``i <= order <= 2`` by 4th-order differences in ln t."""
    if order > 2:
        raise CapabilityError(
            f"finite-difference fallback supports D-order <= 2, requested {order}"
        )
    h = _FD_STEP
    x = np.log(t)
    f0 = np.asarray(value(t), dtype=complex)
    out = [f0]
    if order == 0:
        return out
    fp1, fm1 = value(np.exp(x + h)), value(np.exp(x - h))
    fp2, fm2 = value(np.exp(x + 2 * h)), value(np.exp(x - 2 * h))
    out.append((-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h))
    if order == 2:
        out.append((-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h))
    return out


def _apply_poly_to_plain(plain: list, K: int, P: Poly) -> np.ndarray:
    coeffs = _poly.numeric(P)
    out = np.zeros((K + 1,) + np.shape(plain[0]), dtype=complex)
    for k in range(K + 1):
        for i, c in enumerate(coeffs):
            if c != 0:
                out[k] += c * plain[k + i]
    return out


# ---------------------------------------------------------------------------
# leaves


@dataclass(frozen=True, eq=False)
class PowExp(AnalyticFunction):
    """``coef * t**sigma * exp(-kappa * t**p)``.

    Covers ``exp(-t)``, ``exp(-t**2)``, ``t**2 exp(-t)``, ``exp(-pi t)`` and,
    with ``p < 0``, functions such as ``t**-1 exp(-1/t)``.
    """

    coef: complex = 1.0
    sigma: float = 0.0
    kappa: float = 1.0
    p: float = 1.0

    def __post_init__(self):
        if self.p == 0 or self.kappa <= 0:
            raise ValueError("PowExp needs p != 0 and kappa > 0")
        verify_decay(self)

    @property
    def order0(self):
        return float(self.sigma) if self.p > 0 else INF

    @property
    def order_inf(self):
        return INF if self.p > 0 else -float(self.sigma)

    def at_zero(self):
        if self.p > 0 and self.sigma == 0:
            return complex(self.coef)
        return super().at_zero()

    def plain(self, t, n: int) -> list:
        sigma, p = float(self.sigma), float(self.p)
        y = self.kappa * t**p
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            base = self.coef * np.exp(sigma * np.log(t) - y)
        # Q_{k+1}(y) = sigma Q_k + p y Q_k' - p y Q_k
        q = np.array([1.0])
        out = []
        for _ in range(n + 1):
            with np.errstate(over="ignore", invalid="ignore"):
                val = np.polynomial.polynomial.polyval(y, q) * base
            out.append(np.where(base == 0, 0.0, val).astype(complex))
            dq = np.polynomial.polynomial.polyder(q) if q.size > 1 else np.array([0.0])
            nxt = np.zeros(q.size + 1)
            nxt[: q.size] += sigma * q
            nxt[1 : dq.size + 1] += p * dq
            nxt[1:] -= p * q
            q = nxt
        return out

    def _jets(self, t, K, P):
        plain = self.plain(t, K + len(P) - 1)
        return _apply_poly_to_plain(plain, K, P)


@dataclass(frozen=True, eq=False)
class LogGaussian(AnalyticFunction):
    """``coef * t**sigma * exp(-rho (ln t - center)**2)``."""

    coef: complex = 1.0
    rho: float = 1.0
    sigma: complex = 0.0
    center: float = 0.0

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("LogGaussian needs rho > 0")

    order0 = INF
    order_inf = INF

    def plain(self, t, n: int) -> list:
        x = np.log(t)
        dphi = self.sigma - 2 * self.rho * (x - self.center)
        ddphi = -2 * self.rho
        with np.errstate(under="ignore"):
            g0 = self.coef * np.exp(self.sigma * x - self.rho * (x - self.center) ** 2)
        out = [np.asarray(g0, dtype=complex)]
        if n >= 1:
            out.append(dphi * out[0])
        for k in range(1, n):
            out.append(dphi * out[k] + k * ddphi * out[k - 1])
        return out

    def _jets(self, t, K, P):
        return _apply_poly_to_plain(self.plain(t, K + len(P) - 1), K, P)


@dataclass(frozen=True, eq=False)
class PowerLog(AnalyticFunction):
    """``coef * t**sigma * ln(t)**k`` with exact action of polynomials in D."""

    coef: complex = 1.0
    sigma: complex = 0.0
    k: int = 0

    @property
    def order0(self):
        return float(np.real(self.sigma))

    @property
    def order_inf(self):
        return -float(np.real(self.sigma))

    def _jets(self, t, K, P):
        sigma = _poly.exact(self.sigma)
        L = np.log(t)
        with np.errstate(over="ignore", under="ignore"):
            tpow = np.exp(complex(self.sigma) * L) if isinstance(sigma, complex) else t ** float(sigma)
        out = np.zeros((K + 1,) + t.shape, dtype=complex)
        for j in range(K + 1):
            Q = _poly.shift_x(P, j)
            taylor = _poly.affine(Q, sigma, 1)  # Q(sigma + X): i-th coeff = Q^(i)(sigma)/i!
            acc = np.zeros(t.shape, dtype=complex)
            for i, c in enumerate(taylor[: self.k + 1]):
                if c != 0:
                    ff = math.factorial(self.k) // math.factorial(self.k - i)
                    acc += complex(c) * ff * L ** (self.k - i)
            out[j] = self.coef * tpow * acc
        return out

    def tail_moment(self, U, a):
        b = complex(a + self.sigma)
        if b.real >= 0:
            return None
        lnU = np.log(U)
        Ub = np.exp(b * lnU)
        moment = -Ub / b
        for j in range(1, self.k + 1):
            moment = -Ub * lnU**j / b - (j / b) * moment
        return self.coef * moment


@dataclass(frozen=True, eq=False)
class Bump(AnalyticFunction):
    """Smooth bump ``exp(1 - 1/(1-u**2))`` on ``[a, b]`` with ``u`` affine in ``ln t``."""

    a: float = 1.5
    b: float = 3.0
    coef: complex = 1.0

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise ValueError("Bump needs 0 < a < b")

    order0 = INF
    order_inf = INF

    @property
    def support(self):
        return (self.a, self.b)

    def plain(self, t, n: int) -> list:
        la, lb = math.log(self.a), math.log(self.b)
        u = (2 * np.log(t) - la - lb) / (lb - la)
        scale = 2.0 / (lb - la)
        inside = np.abs(u) < 1
        uu = np.where(inside, u, 0.0)
        g = np.where(inside, np.exp(1.0 - 1.0 / (1.0 - uu * uu)), 0.0)
        # derivatives of phi(u) = 1 - 1/(1-u^2)
        inv_m = 1.0 / (1.0 - uu)
        inv_p = 1.0 / (1.0 + uu)
        dphi = [None]
        for k in range(1, n + 1):
            dphi.append(-0.5 * math.factorial(k) * (inv_m ** (k + 1) + (-1) ** k * inv_p ** (k + 1)))
        h = [np.ones_like(uu)]
        for m in range(n):
            acc = np.zeros_like(uu)
            for k in range(m + 1):
                acc = acc + comb(m, k) * dphi[k + 1] * h[m - k]
            h.append(acc)
        out = []
        with np.errstate(over="ignore", invalid="ignore"):
            for m in range(n + 1):
                val = np.where(g == 0, 0.0, h[m] * g) * scale**m
                out.append((self.coef * val).astype(complex))
        return out

    def _jets(self, t, K, P):
        return _apply_poly_to_plain(self.plain(t, K + len(P) - 1), K, P)


class CallableFunction(AnalyticFunction):
    """Wrap a vectorised callable; jets by finite differences in ``ln t``.

    ``deriv`` (an exact ``d/dt``) replaces the first difference when given.
    """

    exact_jets = False

    def __init__(self, fn, order0=None, order_inf=None, support=None, deriv=None, check=True):
        self.fn = fn
        self.order0 = order0
        self.order_inf = order_inf
        self.support = support
        self._deriv = deriv
        if check:
            verify_decay(self)

    def _value(self, t):
        return np.asarray(self.fn(t), dtype=complex)

    def _jets(self, t, K, P):
        n = K + len(P) - 1
        plain = _fd_jets(self._value, t, n)
        if self._deriv is not None and n >= 1:
            plain[1] = t * np.asarray(self._deriv(t), dtype=complex)
        return _apply_poly_to_plain(plain, K, P)


# ---------------------------------------------------------------------------
# combinators


class PolyD(AnalyticFunction):
    """``Q(D) f`` for an exact polynomial ``Q``; ``H_a`` and ``Delta_a`` are instances."""

    def __init__(self, f: AnalyticFunction, Q: Poly):
        self.f = f
        self.Q = _poly.trim(tuple(_poly.exact(c) for c in Q))
        self.order_inf = f.order_inf
        self.support = f.support
        self.exact_jets = f.exact_jets
        order0 = f.order0
        if f.removable0 and all(_poly.evaluate(self.Q, _poly.exact(e)) == 0 for e in f.removable0):
            order0 = f.order0_regular
        self.order0 = order0

    def _jets(self, t, K, P):
        return self.f.jets(t, K, _poly.mul(P, self.Q))

    def tail_moment(self, U, a):
        # int u^(a-1) Q(D) f du with D acting by parts: D -> -(a) on moments
        # is only exact up to boundary terms, so no shortcut here.
        return None


def H(f: AnalyticFunction, alpha) -> PolyD:
    """``(1 + alpha D) f``."""
    return PolyD(f, _poly.from_operator(alpha=alpha))


def Delta(f: AnalyticFunction, alpha, n: int = 1) -> PolyD:
    """``((1 + alpha D)**2 - 1)**n f``."""
    return PolyD(f, _poly.power(_poly.from_operator(delta=alpha), n))


class PowerSubst(AnalyticFunction):
    """``t**c * f(beta * t**mu)``: dilations, the involutions and their powers."""

    def __init__(self, f: AnalyticFunction, c=0, beta=1.0, mu=1):
        if mu == 0 or beta <= 0:
            raise ValueError("PowerSubst needs mu != 0 and beta > 0")
        self.f, self.c, self.beta, self.mu = f, c, float(beta), mu
        self.exact_jets = f.exact_jets
        cr, m = float(np.real(c)), float(mu)
        if m > 0:
            self.order0 = None if f.order0 is None else cr + m * f.order0
            self.order_inf = None if f.order_inf is None else -cr + m * f.order_inf
        else:
            self.order0 = None if f.order_inf is None else cr + abs(m) * f.order_inf
            self.order_inf = None if f.order0 is None else -cr + abs(m) * f.order0
        if f.support is not None:
            ends = sorted(self._preimage(e, m) for e in f.support)
            self.support = (ends[0], ends[1])

    def _preimage(self, e: float, m: float) -> float:
        if e == 0:
            return 0.0 if m > 0 else INF
        if e == INF:
            return INF if m > 0 else 0.0
        return (e / self.beta) ** (1.0 / m)

    def _jets(self, t, K, P):
        c, mu = self.c, self.mu
        with np.errstate(over="ignore", under="ignore"):
            inner = self.f.jets(self.beta * t ** float(mu), K, _poly.affine(P, c, mu))
        logtc = complex(c) * np.log(t)
        out = np.empty_like(inner)
        for k in range(K + 1):
            mix = _poly.binomial_mix(c, mu, k)
            acc = np.zeros(t.shape, dtype=complex)
            for j, w in enumerate(mix):
                if w != 0:
                    acc += w * inner[j]
            # t**c and f(beta t**mu) can overflow and underflow together
            mag = np.abs(acc)
            ok = (mag > 1e-300) & np.isfinite(mag)
            with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
                val = np.exp(logtc + np.log(np.where(ok, mag, 1.0))) * (acc / np.where(ok, mag, 1.0))
                plain = np.exp(logtc) * acc
            out[k] = np.where(mag == 0, 0.0, np.where(ok, val, plain))
        return out


class Product(AnalyticFunction):
    """Pointwise product, jets by the Leibniz rule."""

    def __init__(self, f: AnalyticFunction, g: AnalyticFunction):
        self.f, self.g = f, g
        self.exact_jets = f.exact_jets and g.exact_jets
        self.order0 = _sum_order(f.order0, g.order0)
        self.order_inf = _sum_order(f.order_inf, g.order_inf)
        if f.support is None:
            self.support = g.support
        elif g.support is None:
            self.support = f.support
        else:
            lo, hi = max(f.support[0], g.support[0]), min(f.support[1], g.support[1])
            self.support = (lo, max(lo, hi))

    def _jets(self, t, K, P):
        n = K + len(P) - 1
        gj = self.g.jets(t, n)
        if isinstance(self.f, Conj) and self.f.f is self.g:
            fj = np.conj(gj)
        else:
            fj = self.f.jets(t, n)
        plain = []
        for m in range(n + 1):
            acc = np.zeros(t.shape, dtype=complex)
            for i in range(m + 1):
                acc += comb(m, i) * fj[i] * gj[m - i]
            plain.append(acc)
        return _apply_poly_to_plain(plain, K, P)


class LinComb(AnalyticFunction):
    """``sum_i c_i f_i``."""

    def __init__(self, terms: Sequence[tuple]):
        self.terms = [(c, f) for c, f in terms if c != 0]
        fs = [f for _, f in self.terms]
        self.exact_jets = all(f.exact_jets for f in fs)
        if fs:
            self.order0 = _min_order(*[f.order0 for f in fs])
            self.order_inf = _min_order(*[f.order_inf for f in fs])
            sups = [f.support for f in fs]
            if all(s is not None for s in sups):
                self.support = (min(s[0] for s in sups), max(s[1] for s in sups))
            else:
                self.support = None
            rem = [set(f.removable0) for f in fs if f.removable0]
            if rem and all(f.removable0 or f.order0 == INF for f in fs):
                self.removable0 = tuple(set().union(*rem))
                regs = [f.order0_regular if f.removable0 else f.order0 for f in fs]
                self.order0_regular = _min_order(*regs)
        else:
            self.order0 = self.order_inf = INF
            self.support = (1.0, 1.0)

    def _jets(self, t, K, P):
        out = np.zeros((K + 1,) + t.shape, dtype=complex)
        for c, f in self.terms:
            out += complex(c) * f.jets(t, K, P)
        return out

    def tail_moment(self, U, a):
        acc = 0
        for c, f in self.terms:
            m = f.tail_moment(U, a)
            if m is None:
                return None
            acc = acc + complex(c) * m
        return acc


class Conj(AnalyticFunction):
    """Complex conjugate ``conj(f)``."""

    def __init__(self, f: AnalyticFunction):
        self.f = f
        self.order0, self.order_inf, self.support = f.order0, f.order_inf, f.support
        self.exact_jets = f.exact_jets

    def _jets(self, t, K, P):
        return np.conj(self.f.jets(t, K, _poly.conj(P)))


def zero_function() -> LinComb:
    return LinComb([])


def tau(f: AnalyticFunction, hbar=0, mu=-1) -> PowerSubst:
    """``t**(mu (1 + hbar)) f(t**mu)``; ``mu = -1`` is the involution."""
    return PowerSubst(f, c=_poly.exact(mu) * (1 + _poly.exact(hbar)), beta=1.0, mu=_poly.exact(mu))


def dilate(f: AnalyticFunction, beta: float) -> PowerSubst:
    """``f(beta t)``."""
    return PowerSubst(f, c=0, beta=beta, mu=1)


def project_phi(f: AnalyticFunction, sign: int = 1) -> LinComb:
    """``(f(t) + sign * f(1/t)) / 2``."""
    sign = 1 if sign >= 0 else -1
    return LinComb([(Fraction(1, 2), f), (Fraction(sign, 2), PowerSubst(f, 0, 1.0, -1))])


def project_tau(f: AnalyticFunction, hbar=0, sign: int = 1) -> LinComb:
    """``(f + sign * tau_hbar f) / 2``."""
    sign = 1 if sign >= 0 else -1
    return LinComb([(Fraction(1, 2), f), (Fraction(sign, 2), tau(f, hbar))])


# ---------------------------------------------------------------------------
# decay spot checks


def verify_decay(f: AnalyticFunction, kmax: int = 8) -> None:
    """Spot-check declared decay orders at ``t = 1e3`` and ``t = 1e-3``.

    A rapid claim must show ``|f(t)| t**k`` (or ``t**-k`` at 0) shrinking from
    the previous decade to the next one for ``k = kmax``; a power claim must
    not grow beyond the declared rate by more than a factor 10.
    """
    for side, order in (("inf", f.order_inf), ("0", f.order0)):
        if order is None:
            continue
        near, far = (1e2, 1e3) if side == "inf" else (1e-2, 1e-3)
        with np.errstate(all="ignore"):
            vn = float(np.abs(f(np.array([near]))[0]))
            vf = float(np.abs(f(np.array([far]))[0]))
        if not (np.isfinite(vn) and np.isfinite(vf)):
            raise DecayCertificateError(f"non-finite value while checking decay at {side}")
        sgn = 1.0 if side == "inf" else -1.0
        if order == INF:
            a, b = vn * near ** (sgn * kmax), vf * far ** (sgn * kmax)
            if vf != 0 and b > a and b > 1e-200:
                raise DecayCertificateError(
                    f"rapid decay at {side} contradicted: |f| t^k grows from {a:.3g} to {b:.3g}"
                )
        else:
            a, b = vn * near ** (sgn * order), vf * far ** (sgn * order)
            if b > 10 * a + 1e-300 and b > 1e-200:
                raise DecayCertificateError(
                    f"power({order:g}) decay at {side} contradicted: {a:.3g} -> {b:.3g}"
                )


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class LogGrid:
    """Uniform grid in ``x = ln t``; symmetric grids make ``t -> 1/t`` an index flip."""

    x_min: float = -12.0
    x_max: float = 12.0
    n_points: int = 4096

    def __post_init__(self):
        n = self.n_points
        if n < 2 or n & (n - 1):
            raise ValueError("n_points must be a power of two")
        if not self.x_min < 0 < self.x_max:
            raise ValueError("grid must straddle x = 0")

    @classmethod
    def symmetric(cls, L: float = 12.0, n: int = 4096) -> "LogGrid":
        return cls(-L, L, n)

    @property
    def is_symmetric(self) -> bool:
        return self.x_min == -self.x_max

    @property
    def step(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def t(self) -> np.ndarray:
        return np.exp(self.x)


@dataclass(frozen=True)
class GridFunction:
    grid: LogGrid
    values: np.ndarray
    window_error: float = 0.0
    flagged: bool = False

    def __post_init__(self):
        if self.values.shape != (self.grid.n_points,):
            raise ValueError("values must match the grid")


def sample(f: AnalyticFunction, grid: LogGrid, window_tol: float = 1e-12) -> GridFunction:
    """Evaluate ``f`` on the grid nodes and attach the boundary magnitude."""
    with np.errstate(all="ignore"):
        vals = np.asarray(f(grid.t), dtype=complex)
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.argmax(bad))
        raise SamplingError(f"evaluation failed at node {i} (x = {grid.x[i]:.6g})")
    werr = float(max(abs(vals[0]), abs(vals[-1])))
    return GridFunction(grid, vals, werr, werr > window_tol)


def interpolate(gf: GridFunction, t) -> np.ndarray:
    """Linear interpolation in ``ln t``."""
    x = np.log(np.asarray(t, dtype=float))
    xs = gf.grid.x
    return np.interp(x, xs, gf.values.real) + 1j * np.interp(x, xs, gf.values.imag)


# ---------------------------------------------------------------------------
# the standard battery


def battery() -> dict[str, AnalyticFunction]:
    """The five reference functions used for extensional operator checks."""
    return {
        "exp": PowExp(1.0, 0.0, 1.0, 1.0),
        "gauss": PowExp(1.0, 0.0, 1.0, 2.0),
        "loggauss": LogGaussian(1.0, 1.0),
        "bump": Bump(1.5, 3.0),
        "t2exp": PowExp(1.0, 2.0, 1.0, 1.0),
    }


def log_extent(f: AnalyticFunction, rel_tol: float = 1e-22, cap: float = 350.0, step: float = 0.5):
    """Window ``[x_lo, x_hi]`` in ``ln t`` outside of which ``|f|`` is negligible.

    Compact supports are used directly; otherwise ``|f(e^x)|`` is probed on a
    coarse grid.  Results are cached on the function object.
    """
    cached = getattr(f, "_extent_cache", None)
    if cached is not None and cached[0] == (rel_tol, cap, step):
        return cached[1]
    if f.support is not None and f.support[0] > 0 and np.isfinite(f.support[1]):
        ext = (math.log(f.support[0]), math.log(f.support[1]))
    else:
        x = np.arange(-cap, cap + step / 2, step)
        with np.errstate(all="ignore"):
            vals = np.abs(f(np.exp(x)))
        vals = np.where(np.isfinite(vals), vals, np.inf)
        peak = np.max(vals[np.isfinite(vals)]) if np.isfinite(vals).any() else 0.0
        keep = np.nonzero(vals > rel_tol * peak)[0]
        if keep.size == 0:
            ext = (0.0, 0.0)
        else:
            ext = (max(x[keep[0]] - step, -cap), min(x[keep[-1]] + step, cap))
    object.__setattr__(f, "_extent_cache", ((rel_tol, cap, step), ext))
    return ext
