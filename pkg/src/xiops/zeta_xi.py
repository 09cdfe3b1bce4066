"""Reference zeta and gamma, three Xi evaluators and the heat-flow deformations.

Conventions
-----------
``xi_direct(z)`` is ``pi^(-z/2) Gamma(z/2) zeta(z)`` (poles at ``z = 0, 1``).
``xi_integral`` and ``xi_ibp`` take the shifted variable ``s`` with
``z = (1 + s) / 2``, so the critical line is ``s`` imaginary.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfcx

from .funcspace import AnalyticFunction, Conj, GridFunction, LogGrid, PowerLog, sample, tau
from .mellin import MellinStripError, convolve, mellin_point, strip
from .operators import ConvFn, ZetaSumFn, bernoulli
from .quadrature import QuadratureError, tanh_sinh
from .special import PSI, ExpPolySeries, apply_Delta, apply_H

__all__ = [
    "PoleError",
    "DomainError",
    "EnvelopeError",
    "ContourError",
    "LatticeMismatchError",
    "zeta_ref",
    "gamma_ref",
    "xi_direct",
    "xi_integral",
    "xi_ibp",
    "continue_general",
    "heat_xi",
    "heat_xi_m",
    "telescope_omega",
    "telescope_closed_form",
    "equisym_roots",
    "ZeroList",
    "find_critical_zeros",
    "bisection_zeros",
    "scan_sign_changes",
    "count_zeros_rectangle",
    "weil_sum",
    "weil_term_direct",
]

ZERO_ENVELOPE = 150.0


class PoleError(ZeroDivisionError):
    """Evaluation at a pole."""


class DomainError(ValueError):
    """Argument outside the implemented region."""


class EnvelopeError(ValueError):
    """Request beyond the accuracy envelope of the reference zeta."""


class ContourError(RuntimeError):
    """The function nearly vanishes on the contour; perturb the box."""


class LatticeMismatchError(RuntimeError):
    """No root was found in the bracket around a predicted lattice point."""


# ---------------------------------------------------------------------------
# zeta and gamma


def _eta_borwein(s: np.ndarray, n: int) -> np.ndarray:
    """Alternating zeta by Borwein's acceleration with ``n`` terms."""
    # d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), built by term ratios
    terms = np.empty(n + 1)
    terms[0] = 1.0
    for i in range(1, n + 1):
        terms[i] = terms[i - 1] * 4.0 * (n + i - 1) * (n - i + 1) / ((2 * i) * (2 * i - 1))
    d = np.cumsum(terms)
    k = np.arange(n, dtype=float)
    weights = ((-1.0) ** k) * (d[:n] - d[n]) / d[n]
    logs = np.log(k + 1.0)
    return -np.exp(-np.outer(s, logs)) @ weights


def _zeta_em(s: np.ndarray, N: int = 40, M: int = 12) -> np.ndarray:
    """Euler-Maclaurin zeta, used where ``1 - 2^(1-s)`` vanishes."""
    n = np.arange(1, N, dtype=float)
    out = np.exp(-np.outer(s, np.log(n))).sum(axis=1)
    out += N ** (1 - s) / (s - 1) + 0.5 * N ** (-s)
    rising = s.copy()  # s (s+1) ... (s + 2j - 2)
    for j in range(1, M + 1):
        out += float(bernoulli(2 * j)) / math.factorial(2 * j) * rising * N ** (-s - 2 * j + 1)
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
    return out


def zeta_ref(s) -> np.ndarray:
    """Riemann zeta for ``Re s > 0`` through the alternating series.

    The number of Borwein terms grows with ``|Im s|`` so that the relative
    error stays near ``1e-14`` up to ``|Im s| = 150``.

    Raises
    ------
    PoleError
        At ``s = 1``.
    DomainError
        For ``Re s <= 0``.
    """
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    flat = arr.ravel()
    if np.any(flat.real <= 0):
        raise DomainError("zeta_ref is implemented for Re s > 0 only")
    if np.any(flat == 1):
        raise PoleError("zeta has a pole at s = 1")
    tmax = float(np.max(np.abs(flat.imag))) if flat.size else 0.0
    n = max(64, int(math.ceil((math.pi * tmax / 2 + 40) / math.log(3 + math.sqrt(8)))))
    out = np.empty(flat.shape, dtype=complex)
    denom = 1 - np.exp((1 - flat) * math.log(2))
    near = np.abs(denom) < 1e-3
    far = ~near
    if far.any():
        out[far] = _eta_borwein(flat[far], n) / denom[far]
    if near.any():
        out[near] = _zeta_em(flat[near])
    out = out.reshape(arr.shape)
    return out if np.ndim(s) else complex(out[0])


_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _log_gamma_right(z: np.ndarray) -> np.ndarray:
    z = z - 1
    x = np.full(z.shape, _LANCZOS[0], dtype=complex)
    for i in range(1, _LANCZOS_G + 2):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (z + 0.5) * np.log(t) - t + np.log(x)


def log_gamma_ref(s) -> np.ndarray:
    """Log-gamma (Lanczos, reflection for ``Re s < 1/2``)."""
    z = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any((z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))):
        raise PoleError("gamma has poles at the nonpositive integers")
    out = np.empty(z.shape, dtype=complex)
    left = z.real < 0.5
    out[~left] = _log_gamma_right(z[~left])
    if left.any():
        zl = z[left]
        out[left] = math.log(math.pi) - np.log(np.sin(np.pi * zl)) - _log_gamma_right(1 - zl)
    return out if np.ndim(s) else complex(out[0])


def gamma_ref(s) -> np.ndarray:
    """Gamma function by the Lanczos approximation (g = 7, 9 terms)."""
    z = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any((z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))):
        raise PoleError("gamma has poles at the nonpositive integers")
    out = np.empty(z.shape, dtype=complex)
    left = z.real < 0.5
    out[~left] = np.exp(_log_gamma_right(z[~left]))
    if left.any():
        zl = z[left]
        out[left] = math.pi / (np.sin(np.pi * zl) * np.exp(_log_gamma_right(1 - zl)))
    return out if np.ndim(s) else complex(out[0])


def xi_direct(z) -> np.ndarray:
    """``pi^(-z/2) Gamma(z/2) zeta(z)``."""
    arr = np.asarray(z, dtype=complex)
    if np.any(arr == 0):
        raise PoleError("Xi has a pole at z = 0")
    val = np.exp(-arr / 2 * math.log(math.pi) + log_gamma_ref(arr / 2)) * zeta_ref(arr)
    return val if np.ndim(z) else complex(val)


# ---------------------------------------------------------------------------
# integral representations on [1, inf)


def _series_upper_limit(series: ExpPolySeries, growth: float, eps: float) -> float:
    """``x_max`` with ``e^(growth x) |series(e^x)|`` below ``eps / 10`` beyond it (geometric bound)."""
    A = float(sum(abs(c) for c in series.poly)) or 1.0
    d = series.degree
    T = 1.0
    while True:
        y = math.pi * T
        # |P(y)| e^{-y} / (1 - e^{-3 pi T}) bounds the series
        bound = A * max(1.0, y) ** d * math.exp(-y) / (1 - math.exp(-3 * math.pi * T))
        if T ** growth * bound <= eps / 10 and y > d + growth + 1:
            return math.log(T)
        T *= 1.1


def _cosh_integral(series: ExpPolySeries, s: np.ndarray, eps: float) -> np.ndarray:
    """``2 int_1^inf dt/t t^(1/4) series(t) cosh(s ln t / 4)`` for each ``s``."""
    growth = 0.25 + float(np.max(np.abs(s.real))) / 4
    X = _series_upper_limit(series, growth, eps)

    def integrand(x, idx):
        xs = x[:, 0]
        vals = series.evaluate_long(np.exp(xs)) * np.exp(xs / 4)
        return 2 * vals[:, None] * np.cosh(np.outer(xs, s[idx]) / 4)

    res = tanh_sinh(integrand, np.zeros(s.size), np.full(s.size, X), rtol=1e-15,
                    atol=eps / 10, noise=1e-17, max_level=14)
    return res.value


def xi_integral(s, eps: float = 1e-14) -> np.ndarray:
    """``Xi((1+s)/2) = -4/(1-s^2) + 2 int_1^inf dt/t t^(1/4) Psi(t) cosh(s ln t / 4)``."""
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(np.abs(arr * arr - 1) == 0):
        raise PoleError("xi_integral has poles at s = +-1")
    val = -4 / (1 - arr * arr) + _cosh_integral(PSI, arr.ravel(), eps).reshape(arr.shape)
    return val if np.ndim(s) else complex(val[0])


def xi_ibp(s, n: int = 0, eps: float = 1e-14) -> np.ndarray:
    """The Delta_4^n-kernel representation, independent of ``n`` in value."""
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    one_minus = 1 - arr * arr
    if np.any(one_minus == 0):
        raise PoleError("xi_ibp has poles at s = +-1")
    series = apply_Delta(PSI, 4, n)
    integral = _cosh_integral(series, arr.ravel(), eps).reshape(arr.shape)
    val = (-1 / one_minus) ** n * integral
    if n == 0:
        val = val - 4 / one_minus
    return val if np.ndim(s) else complex(val[0])


def xi_delta_mellin(s, n: int = 0, eps: float = 1e-14) -> np.ndarray:
    """``(s^2 - 1)^(n+1) Xi((1+s)/2)`` as the pure Mellin integral of ``Delta_4^(n+1) Psi``.

    The Mellin argument is ``(1+s)/4``; no pole is divided out numerically.
    """
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    kernel = apply_Delta(PSI, 4, n + 1).as_function()
    val = mellin_point(kernel, (1 + arr.ravel()) / 4).reshape(arr.shape)
    return val if np.ndim(s) else complex(val[0])


# ---------------------------------------------------------------------------
# general continuation


def continue_general(f: AnalyticFunction, lam: float, s, eps: float = 1e-12,
                     fourier: AnalyticFunction | None = None) -> np.ndarray:
    """``zeta(s) M[f](s/lam)`` continued to all ``s`` by the split integral.

    With ``F(x) = f(|x|^lam)`` and its cosine transform ``G``::

        (-lam/2) [F(0)/s + G(0)/(1-s)]
          + int_1^inf dt/t [t^(s/lam) Z^lam f(t) + t^((1-s)/lam) sum_n G(n t^(1/lam))]

    ``fourier`` may supply ``xi -> G(xi)`` directly (for example when it is
    known in closed form); otherwise it is computed by quadrature.
    """
    from .mellin import FourierEvenFn

    lamf = float(lam)
    arr = np.atleast_1d(np.asarray(s, dtype=complex)).ravel()
    if np.any(arr == 0) or np.any(arr == 1):
        raise PoleError("the continuation has poles at s = 0 and s = 1")
    if f.order_inf is None or f.order_inf != math.inf:
        raise DomainError("continue_general needs rapid decay at infinity")
    G = fourier if fourier is not None else FourierEvenFn(f, lamf)
    if G.order_inf != math.inf and np.any(arr.real <= 1 - G.order_inf):
        raise DomainError(
            f"the Fourier side decays like xi^-{G.order_inf:g}; need Re s > {1 - G.order_inf:g}"
        )
    F0 = f.at_zero()
    G0 = complex(G(np.array([1e-300]))[0]) if fourier is not None else (2 / lamf) * mellin_point(f, 1 / lamf)
    zf = ZetaSumFn(f, lamf)
    gsum = ZetaSumFn(G, 1.0, n_min=8 if G.order_inf != math.inf else None, bernoulli_terms=6)
    # window on x = ln t: both lattice sums decay at least like their n = 1 terms
    probe = np.linspace(0, 60, 241)
    mag = np.abs(f(np.exp(probe))) + np.abs(G(np.exp(probe / lamf)))
    sig = float(np.max(np.abs(arr.real))) / lamf + 1.0 / lamf
    keep = np.nonzero(mag * np.exp(sig * probe) > 1e-18 * np.max(mag))[0]
    X = float(probe[min(keep[-1] + 2, probe.size - 1)])

    def integrand(x, idx):
        xs = x[:, 0]
        t = np.exp(xs)
        a = zf(t)
        b = gsum(t ** (1 / lamf))
        sv = arr[idx]
        return np.exp(np.outer(xs, sv / lamf)) * a[:, None] + np.exp(np.outer(xs, (1 - sv) / lamf)) * b[:, None]

    res = tanh_sinh(integrand, np.zeros(arr.size), np.full(arr.size, X), rtol=eps,
                    noise=1e-16, max_level=12)
    val = (-lamf / 2) * (F0 / arr + G0 / (1 - arr)) + res.value
    return val.reshape(np.shape(s)) if np.ndim(s) else complex(val[0])


# ---------------------------------------------------------------------------
# heat flow


def _erfc_half_line(c: np.ndarray, rho: float) -> np.ndarray:
    """``int_0^inf exp(c x - rho x^2) dx``."""
    return 0.5 * math.sqrt(math.pi / rho) * erfcx(-c / (2 * math.sqrt(rho)))


# functional-equation data K(1/t) = sign t^(1/2) K(t) + a t^(1/2) + b
_KERNELS = {
    "plain": (PSI, 1.0, 0.5, -0.5),
    "tilde": (apply_H(PSI, 4), -1.0, -0.5, -0.5),
}


def heat_xi(rho: float, s, variant: str = "plain", eps: float = 1e-14) -> np.ndarray:
    """``M[K e^(-rho ln^2)](s/2)`` with ``K = Psi`` (plain) or ``H_4 Psi`` (tilde).

    The range ``t < 1`` is folded onto ``t > 1`` with the theta functional
    equation; the elementary remainder is a complementary error function.
    """
    if rho <= 0:
        raise DomainError("rho must be positive")
    if variant not in _KERNELS:
        raise ValueError(f"unknown variant {variant!r}")
    series, sign, a, b = _KERNELS[variant]
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    sf = arr.ravel()
    growth = 0.5 + float(np.max(np.abs(sf.real))) / 2
    X = _series_upper_limit(series, growth, eps)

    def integrand(x, idx):
        xs = x[:, 0]
        k = series(np.exp(xs)) * np.exp(-rho * xs * xs)
        sv = sf[idx]
        w = np.exp(np.outer(xs, sv / 2)) + sign * np.exp(np.outer(xs, (1 - sv) / 2))
        return w * k[:, None]

    res = tanh_sinh(integrand, np.zeros(sf.size), np.full(sf.size, X), rtol=1e-15,
                    atol=eps / 10, noise=1e-17, max_level=14)
    val = res.value + a * _erfc_half_line((1 - sf) / 2, rho) + b * _erfc_half_line(-sf / 2, rho)
    val = val.reshape(arr.shape)
    return val if np.ndim(s) else complex(val[0])


def heat_xi_m(rho: float, s, m: int, variant: str = "plain") -> np.ndarray:
    """``sum_{l<=m} Xi_rho(s+l)``; the tilde variant alternates signs."""
    arr = np.asarray(s, dtype=complex)
    total = 0
    for l in range(m + 1):
        w = (-1) ** l if variant == "tilde" else 1
        total = total + w * heat_xi(rho, arr + l, variant)
    return total


def telescope_omega(m: int, s, rho: float) -> np.ndarray:
    """``(1/2) int_0^1 dt/t (t^((s-1)/2) - t^((s+m)/2)) e^(-rho ln^2 t)`` by quadrature."""
    if m < 0 or m > 6:
        raise DomainError("telescope_omega supports 0 <= m <= 6")
    arr = np.atleast_1d(np.asarray(s, dtype=complex)).ravel()
    X = math.sqrt((45 * math.log(10) + float(np.max(np.abs(arr.real))) * 30 + 30 * m) / rho)

    def integrand(x, idx):
        xs = x[:, 0]  # x = -ln t >= 0
        g = np.exp(-rho * xs * xs)
        sv = arr[idx]
        return 0.5 * (np.exp(-np.outer(xs, (sv - 1) / 2)) - np.exp(-np.outer(xs, (sv + m) / 2))) * g[:, None]

    res = tanh_sinh(integrand, np.zeros(arr.size), np.full(arr.size, X), rtol=1e-15, noise=1e-17,
                    max_level=14)
    out = res.value.reshape(np.shape(s))
    return out if np.ndim(s) else complex(out)


def telescope_closed_form(m: int, s, rho: float) -> np.ndarray:
    """``sqrt(pi/rho) (e^((s-1)^2/16 rho) - e^((s+m)^2/16 rho)) / 2``."""
    s = np.asarray(s, dtype=complex)
    return 0.5 * math.sqrt(math.pi / rho) * (np.exp((s - 1) ** 2 / (16 * rho)) - np.exp((s + m) ** 2 / (16 * rho)))


def equisym_roots(m: int, rho: float, k_max: int, variant: str = "plain",
                  tol: float = 1e-9) -> list[dict]:
    """Locate the zeros of the (anti)symmetrized heat-flow Xi on ``Re s = (1-m)/2``.

    Each predicted lattice point ``(1-m)/2 + i y_k`` gets a bracket of
    ``+-0.4`` lattice spacings; the real residual function is refined with
    Brent's method.  Returns dicts with ``k``, ``predicted``, ``located`` and
    ``residual``.
    """
    if not 1 <= m <= 4:
        raise DomainError("equisym_roots supports 1 <= m <= 4")
    if not 0 <= k_max <= 10:
        raise DomainError("k_max must lie in 0..10")
    if rho <= 0:
        raise DomainError("rho must be positive")
    center = (1 - m) / 2
    spacing = 16 * rho * math.pi / (1 + m)
    tilde = variant == "tilde"
    offset = -8 * rho * math.pi if tilde else 0.0
    # on the line the combination is 2i Im or 2 Re of the m-sum (real kernel)
    use_imag = (not tilde) or (m % 2 == 1)

    def residual(y: float) -> float:
        v = complex(heat_xi_m(rho, center + 1j * y, m, variant))
        return v.imag if use_imag else v.real

    def combination(y: float) -> complex:
        s = center + 1j * y
        a = complex(heat_xi_m(rho, s, m, variant))
        b = complex(heat_xi_m(rho, 1 - m - s, m, variant))
        return a + (-1) ** m * b if tilde else a - b

    out = []
    for k in range(k_max + 1):
        pred = offset + spacing * k
        if not tilde and k == 0:
            out.append({"k": 0, "predicted": pred, "located": 0.0, "residual": abs(combination(0.0))})
            continue
        lo, hi = pred - 0.4 * spacing, pred + 0.4 * spacing
        flo, fhi = residual(lo), residual(hi)
        if flo == 0:
            y = lo
        elif fhi == 0:
            y = hi
        elif np.sign(flo) == np.sign(fhi):
            raise LatticeMismatchError(f"no sign change around predicted root k={k} (y={pred:.9g})")
        else:
            y = brentq(residual, lo, hi, xtol=1e-13, rtol=1e-15, maxiter=200)
        out.append({"k": k, "predicted": pred, "located": y, "residual": abs(combination(y))})
    return out


# ---------------------------------------------------------------------------
# zeros on the critical line


@dataclass
class ZeroList:
    """Ordinates ``t_k`` of zeros ``1/2 + i t_k`` with residuals ``|Xi|``."""

    ordinates: np.ndarray
    residuals: np.ndarray
    method: str = "computed"

    def __post_init__(self):
        self.ordinates = np.asarray(self.ordinates, dtype=float)
        self.residuals = np.asarray(self.residuals, dtype=float)
        if self.ordinates.shape != self.residuals.shape:
            raise ValueError("ordinates and residuals differ in length")
        if np.any(np.diff(self.ordinates) <= 0):
            raise ValueError("ordinates must be strictly increasing")

    def __len__(self):
        return int(self.ordinates.size)

    def head(self, n: int) -> "ZeroList":
        return ZeroList(self.ordinates[:n], self.residuals[:n], self.method)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "ordinate", "residual"])
            for i, (t, r) in enumerate(zip(self.ordinates, self.residuals), start=1):
                w.writerow([i, repr(float(t)), repr(float(r))])

    @classmethod
    def from_csv(cls, path) -> "ZeroList":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if rows and set(rows[0]) != {"index", "ordinate", "residual"}:
            raise ValueError("zero list CSV needs header index,ordinate,residual")
        ords = [float(r["ordinate"]) for r in rows]
        res = [float(r["residual"]) for r in rows]
        return cls(np.array(ords), np.array(res), "loaded")


def _xi_line(t) -> np.ndarray:
    """Real function ``Xi(1/2 + i t)`` (imaginary round-off dropped)."""
    return np.real(xi_direct(0.5 + 1j * np.asarray(t, dtype=float)))


def _xi_line_scaled(t) -> np.ndarray:
    """``Xi(1/2 + i t) e^(pi t / 4)``, of moderate size along the whole line."""
    t = np.asarray(t, dtype=float)
    return _xi_line(t) * np.exp(math.pi * t / 4)


def scan_sign_changes(fun: Callable, t_min: float, t_max: float, step: float) -> list[tuple[float, float]]:
    """Brackets ``[a, b]`` where ``fun`` changes sign on a uniform scan."""
    n = max(1, int(math.ceil((t_max - t_min) / step)))
    grid = np.linspace(t_min, t_max, n + 1)
    vals = np.asarray(fun(grid), dtype=float)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    return [(float(grid[i]), float(grid[i + 1])) for i in idx]


def find_critical_zeros(t_max: float, tol: float = 1e-12, step: float = 0.05) -> ZeroList:
    """All sign changes of ``Xi(1/2 + i t)`` on ``[0, t_max]``, refined by Brent's method."""
    if t_max > ZERO_ENVELOPE:
        raise EnvelopeError(f"t_max = {t_max} exceeds the accuracy envelope {ZERO_ENVELOPE}")
    if t_max <= 0:
        return ZeroList(np.array([]), np.array([]))
    brackets = scan_sign_changes(_xi_line_scaled, 0.0, t_max, step)
    ords, res = [], []
    for a, b in brackets:
        t = brentq(lambda u: float(_xi_line_scaled(u)), a, b, xtol=tol, rtol=1e-15, maxiter=200)
        ords.append(t)
        res.append(abs(complex(xi_direct(0.5 + 1j * t))))
    return ZeroList(np.array(ords), np.array(res))


def bisection_zeros(t_max: float, step: float = 0.05, tol: float = 1e-11) -> np.ndarray:
    """Independent oracle: plain bisection on the theta-integral engine.

    On the critical line ``s = 2 i t`` the integral representation is real.
    """
    def f(t):
        return np.real(xi_integral(2j * np.asarray(t, dtype=float))) * np.exp(math.pi * np.asarray(t) / 4)

    roots = []
    for a, b in scan_sign_changes(f, 0.0, t_max, step):
        fa = float(f(a))
        while b - a > tol:
            mid = 0.5 * (a + b)
            fm = float(f(mid))
            if fm == 0:
                a = b = mid
                break
            if np.sign(fm) == np.sign(fa):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(0.5 * (a + b))
    return np.array(roots)


def count_zeros_rectangle(F: Callable, box: tuple[float, float, float, float],
                          max_step: float = 0.05, max_turn: float = 0.5,
                          min_rel: float = 1e-10) -> int:
    """Winding number of ``F`` around the rectangle ``(re_min, re_max, im_min, im_max)``.

    The contour is sampled adaptively so that consecutive arguments differ by
    less than ``max_turn`` radians.
    """
    x0, x1, y0, y1 = box
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1), complex(x0, y0)]
    total = 0.0
    scale = 0.0
    for a, b in zip(corners[:-1], corners[1:]):
        n = max(2, int(math.ceil(abs(b - a) / max_step)))
        pts = a + (b - a) * np.linspace(0, 1, n + 1)
        vals = np.asarray(F(pts), dtype=complex)
        scale = max(scale, float(np.max(np.abs(vals))))
        seg = [(pts[i], pts[i + 1], vals[i], vals[i + 1]) for i in range(n)]
        while seg:
            p, q, fp, fq = seg.pop()
            if fp == 0 or fq == 0:
                raise ContourError("function vanishes on the contour; perturb the box")
            d = np.angle(fq / fp)
            if abs(d) > max_turn:
                if abs(q - p) < 1e-12:
                    raise ContourError("argument jumps on a tiny segment; a zero lies on the contour")
                mid = 0.5 * (p + q)
                fm = complex(np.asarray(F(np.array([mid])))[0])
                seg.append((p, mid, fp, fm))
                seg.append((mid, q, fm, fq))
            else:
                total += d
    if scale == 0:
        raise ContourError("function vanishes identically on the contour")
    return int(round(total / (2 * math.pi)))


# ---------------------------------------------------------------------------
# Weil sums


def _weil_grid(L: float = 64.0, n: int = 16384) -> LogGrid:
    return LogGrid.symmetric(L, n)


def weil_sum(f: AnalyticFunction, zeros: ZeroList, grid: LogGrid | None = None) -> float:
    """``Re sum_k (M[g](z_k) + M[g](conj z_k))`` with ``g = tau_0 conj(f) * f``, ``z_k = 1/2 + i t_k``.

    ``g`` is formed by grid convolution; the Mellin values at the exact
    ordinates are trapezoid sums on the same grid.
    """
    if len(zeros) == 0:
        return 0.0
    V = tau(Conj(f), 0)
    lo, hi = _conv_strip(V, f)
    if not lo < 0.5 < hi:
        raise MellinStripError(f"Re z = 1/2 lies outside the strip ({lo:g}, {hi:g}) of the Weil kernel")
    grid = grid or _weil_grid()
    # convolve t^(1/2)-weighted samples: the weight commutes with the
    # convolution and keeps roundoff from being amplified by t^(1/2) later
    half = np.sqrt(grid.t)
    Vs, fs = sample(V, grid, window_tol=np.inf), sample(f, grid, window_tol=np.inf)
    gw = convolve(GridFunction(grid, Vs.values * half, Vs.window_error),
                  GridFunction(grid, fs.values * half, fs.window_error))
    x = grid.x
    y = np.concatenate([zeros.ordinates, -zeros.ordinates])
    vals = grid.step * (np.exp(1j * np.outer(y, x)) @ gw.values)
    return float(np.sum(vals).real)


def _conv_strip(V: AnalyticFunction, f: AnalyticFunction) -> tuple[float, float]:
    lv, hv = strip(V)
    lf, hf = strip(f)
    return max(lv, lf), min(hv, hf)


def weil_term_direct(f: AnalyticFunction, t: float) -> float:
    """``2 |M[f](1/2 + i t)|^2``: one paired Weil term from the Mellin transform alone."""
    v = mellin_point(f, 0.5 + 1j * t)
    w = mellin_point(f, 0.5 - 1j * t)
    return float(abs(v) ** 2 + abs(w) ** 2)
