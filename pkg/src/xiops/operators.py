"""Operator expressions acting on :class:`~xiops.funcspace.AnalyticFunction`.

The central numerical object is :class:`ZetaSumFn`, the lattice sum
``sum_{n>=1} f(n^lam t)``.  It is evaluated by a direct sum up to ``N - 1``
followed by an Euler-Maclaurin tail.  The tail integral is reduced by parts to
``S(-1/lam) J_0`` plus boundary terms; when ``S`` is an exact polynomial in
``D`` with ``S(-1/lam) = 0`` (for instance ``H_lam``) the singular ``t^{-1/lam}``
part cancels exactly instead of numerically.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import _poly
from ._poly import ONE, Poly
from .funcspace import (
    INF,
    AnalyticFunction,
    CallableFunction,
    Conj,
    LinComb,
    PolyD,
    PowerLog,
    PowerSubst,
    Product,
    battery,
    log_extent,
)
from .quadrature import tanh_sinh

__all__ = [
    "TruncationError",
    "SingularAdjointError",
    "ZetaSumFn",
    "ConvFn",
    "SubstFn",
    "Substitution",
    "power_substitution",
    "Op",
    "Identity",
    "Dilation",
    "ZetaOp",
    "Hop",
    "DeltaOp",
    "PolyDOp",
    "ItDt",
    "Tau",
    "PowerOp",
    "Mult",
    "Conv",
    "Subst",
    "Compose",
    "OpLinComb",
    "Conjugate",
    "SymmetrizedOp",
    "apply",
    "adjoint",
    "symmetrize",
    "commutator",
    "anticommutator",
    "rota_baxter_R",
    "parse_sexpr",
]


class TruncationError(RuntimeError):
    """A lattice sum could not be certified within its caps."""


class SingularAdjointError(ZeroDivisionError):
    """``H_alpha`` has no adjoint of the form ``c H_beta`` at this weight."""


# ---------------------------------------------------------------------------
# Bernoulli numbers (Akiyama-Tanigawa)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0] if n != 1 else Fraction(-1, 2)


# ---------------------------------------------------------------------------
# lattice sums


# default bound on the length of a direct lattice sum
DIRECT_CAP = 10**6


class ZetaSumFn(AnalyticFunction):
    """``(Z^lam f)(t) = sum_{n>=1} f(n^lam t)``.

    Parameters
    ----------
    f
        Summand; needs exact jets for the Euler-Maclaurin path.
    lam
        Exponent ``lam > 0``.
    n_min
        Direct-sum length (default ``max(32, 20 lam)``).
    bernoulli_terms
        Maximal number of Euler-Maclaurin correction terms.
    wide_support
        Lattice points across a compact support beyond which the sum is
        replaced by its integral.
    """

    def __init__(self, f: AnalyticFunction, lam, n_min: int | None = None,
                 bernoulli_terms: int = 10, direct_cap: int | None = None,
                 wide_support: float = 1000.0):
        if lam <= 0:
            raise ValueError("lam must be positive")
        self.f = f
        self.lam = _poly.exact(lam)
        lamf = float(lam)
        self.n_min = n_min or max(32, int(math.ceil(20 * lamf)))
        self.M = bernoulli_terms
        self.direct_cap = DIRECT_CAP if direct_cap is None else direct_cap
        self.wide_support = wide_support
        self.exact_jets = f.exact_jets
        if f.order_inf is None or lamf * f.order_inf <= 1:
            raise TruncationError(
                f"lattice sum diverges: need lam * order_inf > 1, got lam={lamf}, order_inf={f.order_inf}"
            )
        self.order_inf = f.order_inf
        a = 1.0 / lamf
        self.removable0 = (-1 / self.lam,)
        self.order0_regular = f.order0
        self.order0 = None if f.order0 is None else min(f.order0, -a)
        self.support = None
        if f.support is not None:
            self.support = (0.0, f.support[1])
        self.last_error = 0.0

    # -- helpers --------------------------------------------------------
    def _choose_N(self, t: np.ndarray) -> np.ndarray:
        lamf = float(self.lam)
        N = np.full(t.shape, self.n_min, dtype=np.int64)
        if self.f.support is not None:
            lo, hi = self.f.support
            U = N.astype(float) ** lamf * t
            inside = U < hi
            tin = t[inside]
            with np.errstate(over="ignore"):
                up = np.ceil((hi / tin) ** (1.0 / lamf)) + 1
                down = np.ceil((lo / tin) ** (1.0 / lamf)) - 1
            # compact bumps are only Gevrey-smooth: the trapezoid error decays
            # like exp(-c sqrt(W)) in the number W of lattice points across the
            # support, so the integral alone is used once W is large
            wide = (up - down) > self.wide_support
            down = np.clip(np.minimum(down, self.n_min), 1, None)
            N[inside] = np.where(wide, down, np.minimum(up, 2**62)).astype(np.int64)
        else:
            _, hi = log_extent(self.f)
            if self.f.order_inf == INF and hi < 340:
                with np.errstate(over="ignore"):
                    cut = np.ceil((math.exp(hi) / t) ** (1.0 / lamf)) + 1
                cut = np.clip(np.where(np.isfinite(cut), cut, self.n_min), 2, self.n_min)
                N = np.minimum(N, cut.astype(np.int64))
        return N

    def _tail_J0(self, U: np.ndarray) -> np.ndarray:
        """``int_U^inf u^{1/lam - 1} f(u) du`` for each ``U``."""
        a = 1.0 / float(self.lam)
        closed = self.f.tail_moment(U, a)
        if closed is not None:
            return np.asarray(closed, dtype=complex)
        lo, hi = log_extent(self.f)
        lnU = np.log(U)
        start = np.maximum(lnU, lo)
        end = np.full_like(start, hi)
        live = np.nonzero(start < end)[0]
        out = np.zeros(U.shape, dtype=complex)
        if live.size == 0:
            return out
        f = self.f

        def integrand(x, idx):
            return np.exp(a * x) * f(np.exp(x))

        res = tanh_sinh(integrand, start[live], end[live], rtol=1e-14, noise=1e-17)
        out[live] = res.value
        return out

    # -- evaluation -----------------------------------------------------
    def _jets(self, t, K, P):
        shape = t.shape
        tf = t.ravel()
        out = np.zeros((K + 1, tf.size), dtype=complex)
        if tf.size == 0:
            return out.reshape((K + 1,) + shape)
        if not self.f.exact_jets:
            return self._direct(tf, K, P).reshape((K + 1,) + shape)
        lamf = float(self.lam)
        a_exact = 1 / self.lam
        a = float(a_exact)
        N = self._choose_N(tf)
        Nmax = int(N.max())
        # direct part
        block = max(1, 400_000 // tf.size)
        for n0 in range(1, Nmax, block):
            n = np.arange(n0, min(n0 + block, Nmax), dtype=float)
            live = np.nonzero(N > n0)[0]
            args = (n[:, None] ** lamf) * tf[None, live]
            mask = n[:, None] < N[None, live]
            vals = self.f.jets(args, K, P)  # (K+1, block, live)
            out[:, live] += np.sum(np.where(mask[None], vals, 0.0), axis=1)
        # Euler-Maclaurin tail at x = N, skipped where f is negligible beyond N
        Nf_all = N.astype(float)
        U_all = Nf_all**lamf * tf
        tail = np.ones(tf.size, dtype=bool)
        if self.f.support is None and self.f.order_inf == INF:
            _, hi = log_extent(self.f)
            if hi < 340:
                tail = U_all < math.exp(hi)
        sel = np.nonzero(tail)[0]
        if sel.size == 0:
            self.last_error = 0.0
            return out.reshape((K + 1,) + shape)
        full_out = out
        out = np.zeros((K + 1, sel.size), dtype=complex)
        tf = tf[sel]
        Nf = Nf_all[sel]
        U = U_all[sel]
        degP = len(P) - 1
        dmax = K + degP + 2 * self.M
        plain = self.f.jets(U, dmax)  # D^i f (U)
        need_J0 = False
        S_list = [_poly.shift_x(P, k) for k in range(K + 1)]
        for S in S_list:
            if _poly.evaluate(S, -a_exact) != 0:
                need_J0 = True
        J0 = self._tail_J0(U) if need_J0 else None
        Ua = U**a
        pref = Ua / (lamf * tf ** a)  # (1/lam) t^{-a} maps J to int_N^inf w
        err = np.zeros(tf.size)
        for k, S in enumerate(S_list):
            s_num = _poly.numeric(S)
            # tail integral
            J = np.zeros(tf.size, dtype=complex)
            Sr = _poly.evaluate(S, -a_exact)
            if Sr != 0:
                J += complex(Sr) * J0
            bnd = np.zeros(tf.size, dtype=complex)
            for i, si in enumerate(s_num):
                if si == 0:
                    continue
                for j in range(i):
                    bnd += si * (-a) ** (i - 1 - j) * plain[j]
            J -= Ua * bnd
            total = J / (lamf * tf**a)
            # boundary term w(N)/2
            wN = sum(c * plain[i] for i, c in enumerate(s_num) if c != 0)
            total = total + 0.5 * wN
            # Bernoulli corrections
            R = ONE
            prev = None
            for m in range(1, 2 * self.M):
                R = _poly.mul(R, (Fraction(-(m - 1)), self.lam))  # R_m = prod_{i<m} (lam X - i)
                if m % 2 == 0:
                    continue
                j = (m + 1) // 2
                RS = _poly.numeric(_poly.mul(R, S))
                deriv = sum(c * plain[i] for i, c in enumerate(RS) if c != 0) / Nf**m
                term = -float(bernoulli(2 * j)) / math.factorial(2 * j) * deriv
                mag = np.abs(term)
                if prev is not None and np.all((mag > prev) & (mag > 1e-300)):
                    break
                total = total + term
                prev = mag
            err = np.maximum(err, prev if prev is not None else 0.0)
            out[k] += total
        self.last_error = float(np.max(err)) if err.size else 0.0
        full_out[:, sel] += out
        return full_out.reshape((K + 1,) + shape)

    def _direct(self, tf, K, P):
        """Plain truncated sum for summands without exact jets."""
        lamf = float(self.lam)
        out = np.zeros((K + 1, tf.size), dtype=complex)
        order = self.f.order_inf
        n0 = 1
        block = 256
        while True:
            n = np.arange(n0, n0 + block, dtype=float)
            vals = self.f.jets((n[:, None] ** lamf) * tf[None, :], K, P)
            out += vals.sum(axis=1)
            last = np.max(np.abs(vals[:, -1, :]))
            scale = max(np.max(np.abs(out)), 1e-300)
            nlast = n[-1]
            if order == INF:
                bound = last * 10
            else:
                bound = last * nlast / max(lamf * order - 1, 1e-12)
            if bound <= 1e-15 * scale:
                self.last_error = float(bound)
                return out
            n0 += block
            if n0 > self.direct_cap:
                raise TruncationError(
                    f"direct lattice sum needs more than {self.direct_cap} terms (tail bound {bound:.3g})"
                )


class ConvFn(AnalyticFunction):
    """Multiplicative convolution ``(V * f)(t) = int dy/y V(t/y) f(y)``."""

    def __init__(self, V: AnalyticFunction, f: AnalyticFunction):
        self.V, self.f = V, f
        self.exact_jets = f.exact_jets
        lo = max(-(V.order0 if V.order0 is not None else -INF), -(f.order0 if f.order0 is not None else -INF))
        hi = min(V.order_inf if V.order_inf is not None else -INF, f.order_inf if f.order_inf is not None else -INF)
        if not lo < hi:
            raise ValueError("convolution diverges: Mellin strips of the factors do not overlap")
        self.order0 = min(V.order0, f.order0)
        self.order_inf = min(V.order_inf, f.order_inf)
        if V.support is not None and f.support is not None:
            self.support = (V.support[0] * f.support[0], V.support[1] * f.support[1])

    def _jets(self, t, K, P):
        shape = t.shape
        tf = t.ravel()
        lt = np.log(tf)
        flo, fhi = log_extent(self.f)
        vlo, vhi = log_extent(self.V)
        a = np.maximum(flo, lt - vhi)
        b = np.minimum(fhi, lt - vlo)
        empty = a >= b
        b = np.where(empty, a, b)
        V, f = self.V, self.f

        def integrand(x, idx):
            vals = f.jets(np.exp(x), K, P)  # (K+1, n, m)
            w = V(tf[idx][None, :] * np.exp(-x))
            return np.moveaxis(vals * w[None], 0, -1)

        res = tanh_sinh(integrand, a, b, rtol=1e-14, noise=1e-17, max_level=13)
        vals = np.where(empty[:, None], 0.0, res.value)
        return vals.T.reshape((K + 1,) + shape)


@dataclass(frozen=True)
class Substitution:
    """A monotone bijection of ``(0, inf)`` with inverse and derivative."""

    forward: Callable
    inverse: Callable
    derivative: Callable
    increasing: bool = True
    power: tuple | None = None  # (beta, mu) when g(t) = beta t^mu
    name: str = "g"


def power_substitution(beta: float = 1.0, mu=1) -> Substitution:
    mu_f = float(mu)
    return Substitution(
        forward=lambda t: beta * t**mu_f,
        inverse=lambda u: (u / beta) ** (1.0 / mu_f),
        derivative=lambda t: beta * mu_f * t ** (mu_f - 1),
        increasing=mu_f > 0,
        power=(beta, mu),
        name=f"{beta:g}*t^{mu_f:g}",
    )


class SubstFn(AnalyticFunction):
    """``V(g(t)) f(g(t))`` for a general substitution (finite-difference jets)."""

    exact_jets = False

    def __init__(self, f: AnalyticFunction, V: AnalyticFunction, g: Substitution,
                 order0=None, order_inf=None):
        self.f, self.V, self.g = f, V, g
        self.order0, self.order_inf = order0, order_inf

    def _value(self, t):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            u = self.g.forward(t)
            inside = np.isfinite(u) & (u > 0)
            us = np.where(inside, u, 1.0)
            vals = self.V(us) * self.f(us)
        # g maps the ends of (0, inf) to its ends, where the declared decay applies
        return np.where(inside & np.isfinite(vals), vals, 0.0)

    def _jets(self, t, K, P):
        from .funcspace import _apply_poly_to_plain, _fd_jets

        return _apply_poly_to_plain(_fd_jets(self._value, t, K + len(P) - 1), K, P)


# ---------------------------------------------------------------------------
# operator expressions


class Op:
    """Base class of operator expressions."""

    antilinear = False

    def on(self, f: AnalyticFunction) -> AnalyticFunction:  # pragma: no cover
        raise NotImplementedError

    def adjoint(self, hbar) -> "Op":  # pragma: no cover
        raise NotImplementedError

    def to_sexpr(self) -> str:  # pragma: no cover
        raise NotImplementedError

    def __call__(self, f: AnalyticFunction) -> AnalyticFunction:
        return self.on(f)

    def __matmul__(self, other: "Op") -> "Compose":
        return Compose((self, other))

    def __add__(self, other: "Op") -> "OpLinComb":
        return OpLinComb(((1, self), (1, other)))

    def __sub__(self, other: "Op") -> "OpLinComb":
        return OpLinComb(((1, self), (-1, other)))

    def __rmul__(self, c) -> "OpLinComb":
        return OpLinComb(((c, self),))

    def __repr__(self):
        return self.to_sexpr()


def _num(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.15g}{x.imag:+.15g}j"
    return f"{float(x):.15g}"


@dataclass(frozen=True, repr=False)
class Identity(Op):
    def on(self, f):
        return f

    def adjoint(self, hbar):
        return self

    def to_sexpr(self):
        return "(id)"


@dataclass(frozen=True, repr=False)
class PowerOp(Op):
    """``f -> t^c f(beta t^mu)`` times ``scale``."""

    c: object = 0
    beta: float = 1.0
    mu: object = 1
    scale: complex = 1.0

    def on(self, f):
        g = PowerSubst(f, self.c, self.beta, self.mu)
        return g if self.scale == 1 else LinComb([(self.scale, g)])

    def adjoint(self, hbar):
        h = _poly.exact(hbar)
        mu = _poly.exact(self.mu)
        c = _poly.exact(self.c)
        cbar = c.conjugate() if isinstance(c, complex) else c
        e = (h + cbar + 1) / mu
        c_new = -h - 1 + e
        beta_new = self.beta ** (-1.0 / float(mu))
        scale = np.conj(self.scale) / abs(float(mu)) * self.beta ** (-float(np.real(complex(e))))
        if isinstance(e, complex):
            scale = scale * self.beta ** (-1j * e.imag)
        return _simplify_power(PowerOp(c_new, beta_new, 1 / mu, scale), hbar)

    def to_sexpr(self):
        return f"(power {_num(self.c)} {_num(self.beta)} {_num(self.mu)} {_num(self.scale)})"


def _simplify_power(op: PowerOp, hbar) -> Op:
    mu = _poly.exact(op.mu)
    c = _poly.exact(op.c)
    if mu == 1 and c == 0:
        d = Dilation(op.beta)
        return d if op.scale == 1 else OpLinComb(((op.scale, d),))
    if op.beta == 1.0 and not isinstance(c, complex) and c == mu * (1 + _poly.exact(hbar)):
        tt = Tau(hbar, mu)
        return tt if op.scale == 1 else OpLinComb(((op.scale, tt),))
    return op


@dataclass(frozen=True, repr=False)
class Dilation(Op):
    """``d_beta f(t) = f(beta t)``."""

    beta: float = 1.0

    def on(self, f):
        return PowerSubst(f, 0, self.beta, 1)

    def adjoint(self, hbar):
        return PowerOp(0, self.beta, 1).adjoint(hbar)

    def to_sexpr(self):
        return f"(d {_num(self.beta)})"


@dataclass(frozen=True, repr=False)
class Tau(Op):
    """``f -> t^{mu (1 + hbar)} f(t^mu)``; ``mu = -1`` is the involution.

    ``shift`` perturbs the exponent and exists only for fault injection.
    """

    hbar: float = 0.0
    mu: object = -1
    shift: float = 0.0

    @property
    def exponent(self):
        e = _poly.exact(self.mu) * (1 + _poly.exact(self.hbar))
        return e + _poly.exact(self.shift) if self.shift else e

    def on(self, f):
        return PowerSubst(f, self.exponent, 1.0, _poly.exact(self.mu))

    def adjoint(self, hbar):
        if self.shift:
            return PowerOp(self.exponent, 1.0, self.mu).adjoint(hbar)
        mu = _poly.exact(self.mu)
        h_own, h = _poly.exact(self.hbar), _poly.exact(hbar)
        core = Tau(hbar, 1 / mu)
        scale = Fraction(1) / abs(mu)
        if h_own != h:
            core = Compose((Mult(PowerLog(1.0, h_own - h, 0)), core))
        return core if scale == 1 else OpLinComb(((scale, core),))

    def to_sexpr(self):
        return f"(tau {_num(self.hbar)} {_num(self.mu)})"


@dataclass(frozen=True, repr=False)
class ZetaOp(Op):
    """``Z^lam = sum_n d_{n^lam}``."""

    lam: float = 1.0

    def on(self, f):
        return ZetaSumFn(f, self.lam)

    def adjoint(self, hbar):
        t = Tau(hbar, -1)
        return Compose((t, self, t))

    def to_sexpr(self):
        return f"(Z {_num(self.lam)})"


@dataclass(frozen=True, repr=False)
class PolyDOp(Op):
    """``P(D)`` with ``D = t d/dt``; coefficients low-to-high."""

    coeffs: tuple = (1,)

    def poly(self) -> Poly:
        return _poly.trim(tuple(_poly.exact(c) for c in self.coeffs))

    def on(self, f):
        return PolyD(f, self.poly())

    def adjoint(self, hbar):
        # D* = -(1 + hbar) - D for the weight t^hbar
        h = _poly.exact(hbar)
        return PolyDOp(_poly.affine(_poly.conj(self.poly()), -(1 + h), -1))

    def to_sexpr(self):
        return "(poly " + " ".join(_num(c) for c in self.coeffs) + ")"


@dataclass(frozen=True, repr=False)
class Hop(Op):
    """``H_alpha = 1 + alpha D``."""

    alpha: complex = 1.0

    def on(self, f):
        return PolyD(f, _poly.from_operator(alpha=self.alpha))

    def adjoint(self, hbar):
        a = _poly.exact(self.alpha)
        abar = a.conjugate() if isinstance(a, complex) else a
        h = _poly.exact(hbar)
        denom = abar * (1 + h) - 1
        if denom == 0:
            raise SingularAdjointError(
                f"H_{_num(self.alpha)} at hbar={_num(hbar)}: adjoint is -conj(alpha) D, not of the form c H_beta"
            )
        return OpLinComb(((1 - abar * (1 + h), Hop(abar / denom)),))

    def to_sexpr(self):
        return f"(H {_num(self.alpha)})"


@dataclass(frozen=True, repr=False)
class DeltaOp(Op):
    """``Delta_alpha = H_alpha^2 - 1``."""

    alpha: complex = 1.0

    def on(self, f):
        return PolyD(f, _poly.from_operator(delta=self.alpha))

    def adjoint(self, hbar):
        return PolyDOp(_poly.from_operator(delta=self.alpha)).adjoint(hbar)

    def to_sexpr(self):
        return f"(Delta {_num(self.alpha)})"


@dataclass(frozen=True, repr=False)
class ItDt(Op):
    """``i t d/dt``, self-adjoint for the weight ``hbar = -1``."""

    def on(self, f):
        return PolyD(f, (0, 1j))

    def adjoint(self, hbar):
        if _poly.exact(hbar) == -1:
            return self
        return PolyDOp(_poly.affine(_poly.conj((Fraction(0), 1j)), -(1 + _poly.exact(hbar)), -1))

    def to_sexpr(self):
        return "(itdt)"


@dataclass(frozen=True, repr=False)
class Mult(Op):
    """Multiplication by ``V``."""

    V: AnalyticFunction
    label: str = "V"

    def on(self, f):
        return Product(self.V, f)

    def adjoint(self, hbar):
        return Mult(Conj(self.V), f"conj({self.label})")

    def to_sexpr(self):
        return f"(mult {self.label})"


@dataclass(frozen=True, repr=False)
class Conv(Op):
    """Multiplicative convolution with ``V``."""

    V: AnalyticFunction
    label: str = "V"

    def on(self, f):
        return ConvFn(self.V, f)

    def adjoint(self, hbar):
        return Conv(Tau(hbar, -1).on(Conj(self.V)), f"tau(conj({self.label}))")

    def to_sexpr(self):
        return f"(conv {self.label})"


@dataclass(frozen=True, repr=False)
class Subst(Op):
    """``f -> V(g(t)) f(g(t))``."""

    V: AnalyticFunction
    g: Substitution
    label: str = "V"
    order0: float | None = None
    order_inf: float | None = None

    def on(self, f):
        if self.g.power is not None:
            beta, mu = self.g.power
            return PowerSubst(Product(self.V, f), 0, beta, mu)
        return SubstFn(f, self.V, self.g, self.order0, self.order_inf)

    def adjoint(self, hbar):
        g = self.g
        h = float(hbar)
        if g.power is not None:
            beta, mu = g.power
            mu_e, h_e = _poly.exact(mu), _poly.exact(hbar)
            c = h_e * (1 - mu_e) + 1 - mu_e
            scale = beta ** (-h - 1) / abs(float(mu))
            Vnew = LinComb([(scale, PowerSubst(Conj(self.V), c, beta, mu))])
            ginv = power_substitution(beta ** (-1.0 / float(mu)), 1 / mu_e)
            return Subst(Vnew, ginv, f"adj({self.label})")
        V = self.V
        sgn = 1.0 if g.increasing else -1.0

        def vnew(w):
            u = g.forward(w)
            return w**h * np.conj(V(u)) / (u**h * sgn * g.derivative(w))

        inv = Substitution(g.inverse, g.forward, lambda u: 1.0 / g.derivative(g.inverse(u)),
                           g.increasing, None, f"inv({g.name})")
        # the adjoint inherits the declared end behaviour of the original
        return Subst(CallableFunction(vnew, check=False), inv, f"adj({self.label})",
                     self.order0, self.order_inf)

    def to_sexpr(self):
        return f"(subst {self.label} {self.g.name})"


@dataclass(frozen=True, repr=False)
class Conjugate(Op):
    antilinear = True

    def on(self, f):
        return Conj(f)

    def adjoint(self, hbar):
        return self

    def to_sexpr(self):
        return "(conj)"


@dataclass(frozen=True, repr=False)
class Compose(Op):
    """``ops[0] o ops[1] o ... o ops[-1]`` (rightmost acts first)."""

    ops: tuple = ()

    def __post_init__(self):
        if not self.ops:
            raise ValueError("Compose needs at least one operator")
        object.__setattr__(self, "ops", tuple(self.ops))

    @property
    def antilinear(self):
        return sum(op.antilinear for op in self.ops) % 2 == 1

    def on(self, f):
        for op in reversed(self.ops):
            f = op.on(f)
        return f

    def adjoint(self, hbar):
        return Compose(tuple(op.adjoint(hbar) for op in reversed(self.ops)))

    def to_sexpr(self):
        return "(compose " + " ".join(op.to_sexpr() for op in self.ops) + ")"


@dataclass(frozen=True, repr=False)
class OpLinComb(Op):
    """``sum_i c_i A_i``."""

    terms: tuple = ()

    def __post_init__(self):
        if not self.terms:
            raise ValueError("linear combination needs at least one term")
        object.__setattr__(self, "terms", tuple((c, op) for c, op in self.terms))

    def on(self, f):
        return LinComb([(c, op.on(f)) for c, op in self.terms])

    def adjoint(self, hbar):
        return OpLinComb(tuple((np.conj(complex(c)) if isinstance(c, complex) else c, op.adjoint(hbar))
                               for c, op in self.terms))

    def to_sexpr(self):
        return "(lincomb " + " ".join(f"({_num(c)} {op.to_sexpr()})" for c, op in self.terms) + ")"


def commutator(A: Op, B: Op) -> OpLinComb:
    return OpLinComb(((1, Compose((A, B))), (-1, Compose((B, A)))))


def anticommutator(A: Op, B: Op) -> OpLinComb:
    return OpLinComb(((1, Compose((A, B))), (1, Compose((B, A)))))


# ---------------------------------------------------------------------------
# symmetrizations


@dataclass(frozen=True)
class SymmetrizedOp:
    """One of the four self-adjoint combinations of ``H_lam Z^lam`` with ``tau_hbar``.

    ``tau_shift`` perturbs the involution's exponent (fault injection only).
    """

    kind: str
    lam: float
    hbar: float
    tau_shift: float = 0.0

    KINDS = ("Zsym_plus", "Zsym_minus", "Zhat_plus", "Zhat_minus")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown symmetrization {self.kind!r}")

    def expand(self) -> Op:
        A = Compose((Hop(self.lam), ZetaOp(self.lam)))
        tau = Tau(self.hbar, -1, self.tau_shift)
        mirrored = Compose((tau, Hop(self.lam), ZetaOp(self.lam), tau))
        if self.kind == "Zsym_plus":
            return OpLinComb(((Fraction(1, 2), A), (Fraction(1, 2), mirrored)))
        if self.kind == "Zsym_minus":
            return OpLinComb(((0.5j, A), (-0.5j, mirrored)))
        if self.kind == "Zhat_plus":
            return Compose((Hop(self.lam), ZetaOp(self.lam), tau))
        return Compose((tau, Hop(self.lam), ZetaOp(self.lam)))

    def on(self, f):
        return self.expand().on(f)


def apply(op, f: AnalyticFunction, t, eps: float = 1e-10):
    """Evaluate ``(op f)(t)``."""
    if isinstance(op, SymmetrizedOp):
        op = op.expand()
    return op.on(f)(np.asarray(t, dtype=float))


def adjoint(op: Op, hbar) -> Op:
    """Structural adjoint for the inner product ``int t^hbar conj(f) g dt``."""
    if isinstance(op, SymmetrizedOp):
        op = op.expand()
    return op.adjoint(hbar)


def symmetrize(op: Op, hbar, which: str) -> Op:
    """``p``: (A + A*)/2, ``d``: i(A - A*)/2, ``pre_tau``: tau A, ``post_tau``: A tau."""
    tau = Tau(hbar, -1)
    if which == "p":
        return OpLinComb(((Fraction(1, 2), op), (Fraction(1, 2), op.adjoint(hbar))))
    if which in ("d", "partial", "∂"):
        return OpLinComb(((0.5j, op), (-0.5j, op.adjoint(hbar))))
    if which == "pre_tau":
        return Compose((tau, op))
    if which == "post_tau":
        return Compose((op, tau))
    raise ValueError(f"unknown symmetrization {which!r}")


# ---------------------------------------------------------------------------
# one-sided lattice sum on the line


def rota_baxter_R(F: Callable, x, eps: float = 1e-16, decay_power: float | None = None,
                  cap: int = 10**6) -> np.ndarray:
    """``(R F)(x) = sum_{n>=1} F(x + n)`` with a tail bound below ``eps``.

    ``decay_power = None`` declares rapid decay; a finite power ``p > 2``
    uses the bound ``|F(x+N)| (x+N) / (p-1)`` for the remaining tail.
    """
    if decay_power is not None and decay_power <= 2:
        raise TruncationError("R needs decay faster than 1/x^2")
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape, dtype=np.result_type(float, np.asarray(F(x + 1.0)).dtype))
    n = 1
    block = 64
    while True:
        ns = np.arange(n, n + block, dtype=float).reshape((-1,) + (1,) * x.ndim)
        vals = np.asarray(F(x[None] + ns))
        total = total + vals.sum(axis=0)
        last = np.max(np.abs(vals[-1])) if vals.size else 0.0
        if decay_power is None:
            bound = last * 2
        else:
            bound = last * float(np.max(np.abs(x) + n + block)) / (decay_power - 1)
        if bound <= eps and np.all(np.abs(vals[-1]) <= np.abs(vals[0]) + 1e-300):
            return total
        n += block
        if n > cap:
            raise TruncationError(f"R sum not certified after {cap} terms")


# ---------------------------------------------------------------------------
# S-expressions

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)


def _parse_number(tok: str):
    try:
        if tok.endswith("j"):
            return complex(tok)
        val = float(tok)
    except ValueError as exc:
        raise ValueError(f"expected a decimal literal, got {tok!r}") from exc
    return val


def parse_sexpr(text: str, functions: dict[str, AnalyticFunction] | None = None) -> Op:
    """Parse ``(H a) | (Z l) | (tau h m) | (d b) | (mult f) | (conv f) |
    (compose e ...) | (lincomb (c e) ...)`` into an :class:`Op`."""
    functions = battery() if functions is None else functions
    tokens = _tokenize(text)
    pos = 0

    def expect(tok):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            got = tokens[pos] if pos < len(tokens) else "end of input"
            raise ValueError(f"expected {tok!r}, got {got!r}")
        pos += 1

    def atom():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        return tok

    def expr() -> Op:
        expect("(")
        head = atom()
        if head == "H":
            op = Hop(_parse_number(atom()))
        elif head == "Delta":
            op = DeltaOp(_parse_number(atom()))
        elif head == "Z":
            op = ZetaOp(_parse_number(atom()))
        elif head == "tau":
            op = Tau(_parse_number(atom()), _parse_number(atom()))
        elif head == "d":
            op = Dilation(_parse_number(atom()))
        elif head in ("mult", "conv"):
            name = atom()
            if name not in functions:
                raise ValueError(f"unknown function {name!r}; known: {', '.join(sorted(functions))}")
            op = (Mult if head == "mult" else Conv)(functions[name], name)
        elif head == "compose":
            items = []
            while pos < len(tokens) and tokens[pos] == "(":
                items.append(expr())
            op = Compose(tuple(items))
        elif head == "lincomb":
            items = []
            while pos < len(tokens) and tokens[pos] == "(":
                expect("(")
                c = _parse_number(atom())
                items.append((c, expr()))
                expect(")")
            op = OpLinComb(tuple(items))
        elif head == "id":
            op = Identity()
        else:
            raise ValueError(f"unknown operator {head!r}")
        expect(")")
        return op

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input after expression: {' '.join(tokens[pos:])}")
    return result
