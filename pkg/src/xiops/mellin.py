"""Mellin transforms, the weighted inner product and multiplicative convolution.

Point values use tanh-sinh quadrature in ``x = ln t``.  Whole vertical lines
and grid convolutions use the FFT on a :class:`~xiops.funcspace.LogGrid`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _poly
from ._poly import ONE
from .funcspace import (
    INF,
    AnalyticFunction,
    Conj,
    GridFunction,
    Product,
    log_extent,
)
from .quadrature import QuadratureError, tanh_sinh

__all__ = [
    "MellinStripError",
    "MellinLine",
    "strip",
    "mellin_point",
    "mellin_line",
    "inverse_line",
    "inner_product",
    "convolve",
    "fourier_even",
    "FourierEvenFn",
]


class MellinStripError(ValueError):
    """Requested point lies outside the certified strip of convergence."""


@dataclass(frozen=True)
class MellinLine:
    """Mellin transform sampled on ``Re s = c``."""

    c: float
    y_values: np.ndarray
    values: np.ndarray
    window_error: float
    warning: bool = False

    def at(self, y) -> np.ndarray:
        """Linear interpolation along the line."""
        y = np.asarray(y, dtype=float)
        v = self.values
        return np.interp(y, self.y_values, v.real) + 1j * np.interp(y, self.y_values, v.imag)


def strip(f: AnalyticFunction) -> tuple[float, float]:
    """Open interval of ``Re s`` on which the Mellin integral converges."""
    lo = INF if f.order0 is None else -f.order0
    hi = -INF if f.order_inf is None else f.order_inf
    return lo, hi


def _check_strip(f: AnalyticFunction, sigma: np.ndarray) -> None:
    lo, hi = strip(f)
    bad_lo = sigma <= lo
    if np.any(bad_lo):
        raise MellinStripError(
            f"Re s = {float(sigma[bad_lo][0]):.6g} is not above the left strip edge {lo:.6g} "
            "(decay at 0 insufficient)"
        )
    bad_hi = sigma >= hi
    if np.any(bad_hi):
        raise MellinStripError(
            f"Re s = {float(sigma[bad_hi][0]):.6g} is not below the right strip edge {hi:.6g} "
            "(decay at infinity insufficient)"
        )


_PROBE_STEP = 0.5
_PROBE_CAP = 350.0
_TAIL_CUT = 36.0


def _probe(f: AnalyticFunction):
    """``|f(e^x)|`` on a coarse grid, cached on the function object."""
    cached = getattr(f, "_probe_cache", None)
    if cached is not None:
        return cached
    x = np.arange(-_PROBE_CAP, _PROBE_CAP + _PROBE_STEP / 2, _PROBE_STEP)
    with np.errstate(all="ignore"):
        mags = np.abs(f(np.exp(x)))
    mags = np.where(np.isfinite(mags), mags, np.inf)
    object.__setattr__(f, "_probe_cache", (x, mags))
    return x, mags


def _window(f: AnalyticFunction, sigma: float, rel_tol: float):
    """Window in ``x = ln t`` outside of which ``e^(sigma x) |f(e^x)|`` integrates below ``rel_tol``."""
    if f.support is not None and f.support[0] > 0 and np.isfinite(f.support[1]):
        return math.log(f.support[0]), math.log(f.support[1])
    x, mags = _probe(f)
    with np.errstate(all="ignore"):
        w = mags * np.exp(sigma * x)
    w = np.where(np.isnan(w), 0.0, w)
    if not np.all(np.isfinite(w)):
        raise QuadratureError("integrand not finite on the probe grid")
    peak = w.max()
    if peak == 0:
        return 0.0, 0.0
    left = sigma + f.order0 if f.order0 not in (None, INF) else 1.0
    right = f.order_inf - sigma if f.order_inf not in (None, INF) else 1.0
    # the tail beyond x is roughly w(x) / rate
    rate = np.where(x < x[np.argmax(w)], max(left, 1e-3), max(right, 1e-3))
    keep = np.nonzero(w / np.minimum(rate, 1.0) > rel_tol * peak)[0]
    lo = max(x[keep[0]] - 2 * _PROBE_STEP, -_PROBE_CAP)
    hi = min(x[keep[-1]] + 2 * _PROBE_STEP, _PROBE_CAP)
    return float(lo), float(hi)


def _power_tail(f: AnalyticFunction, side: str, order: float, s: np.ndarray, cut: float):
    """Analytic tail of ``int e^(s x) f(e^x) dx`` beyond ``cut`` assuming ``f ~ c t^e``.

    ``c`` is read off at ``cut`` and 8 units further out; if the two disagree
    the power law has not set in and ``None`` is returned.
    """
    e = order if side == "left" else -order
    pts = np.array([cut, cut - 8.0 if side == "left" else cut + 8.0])
    with np.errstate(all="ignore"):
        c = f(np.exp(pts)) * np.exp(-e * pts)
    if not np.all(np.isfinite(c)) or abs(c[0] - c[1]) > 1e-13 * abs(c[0]) + 1e-300:
        return None
    rate = s + e
    tail = c[0] * np.exp(rate * cut) / rate
    return tail if side == "left" else -tail


def mellin_point(f: AnalyticFunction, s, eps: float = 1e-13, max_level: int = 14) -> np.ndarray:
    """``M[f](s) = int_0^inf t^(s-1) f(t) dt`` for scalar or array ``s``.

    Power-law tails beyond ``|ln t| = 36`` are integrated in closed form once
    the leading coefficient is seen to be stable.

    Raises
    ------
    MellinStripError
        If some ``Re s`` lies outside the strip given by the decay orders.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    shape = np.shape(s)
    sf = s_arr.ravel()
    _check_strip(f, sf.real)
    lo, hi = INF, -INF
    for sig in np.unique(sf.real):
        a, b = _window(f, float(sig), rel_tol=min(eps, 1e-16) * 1e-3)
        lo, hi = min(lo, a), max(hi, b)
    if not lo < hi:
        return np.zeros(shape, dtype=complex) if shape else 0j
    extra = np.zeros(sf.size, dtype=complex)
    if lo < -_TAIL_CUT and f.order0 not in (None, INF):
        tail = _power_tail(f, "left", f.order0, sf, -_TAIL_CUT)
        if tail is not None:
            extra += tail
            lo = -_TAIL_CUT
    if hi > _TAIL_CUT and f.order_inf not in (None, INF):
        tail = _power_tail(f, "right", f.order_inf, sf, _TAIL_CUT)
        if tail is not None:
            extra += tail
            hi = _TAIL_CUT

    def integrand(x, idx):
        xs = x[:, 0]
        fx = f(np.exp(xs))
        return np.exp(np.outer(xs, sf[idx])) * fx[:, None]

    # start at a level that resolves the oscillation, or coarse levels can alias
    # into spurious agreement
    omega = float(np.max(np.abs(sf.imag))) * (hi - lo)
    min_level = max(3, math.ceil(math.log2(max(0.5 * omega, 1.0))))
    res = tanh_sinh(integrand, np.full(sf.size, lo), np.full(sf.size, hi), rtol=eps,
                    noise=1e-16, min_level=min_level, max_level=max(max_level, min_level + 2))
    out = res.value + extra
    return out.reshape(shape) if shape else complex(out[0])


def mellin_line(gf: GridFunction, c: float, tol: float = 1e-12) -> MellinLine:
    """All values ``M[f](c + i y_k)`` with ``y_k = 2 pi k / (n h)`` in one FFT."""
    grid = gf.grid
    h, n = grid.step, grid.n_points
    x = grid.x
    weighted = np.exp(c * x) * gf.values
    werr = float(max(abs(weighted[0]), abs(weighted[-1])))
    spec = np.fft.ifft(weighted) * n  # sum_j w_j exp(+2 pi i j k / n)
    k = np.fft.fftfreq(n, d=1.0 / n)
    y = 2 * np.pi * k / (n * h)
    vals = h * np.exp(1j * y * grid.x_min) * spec
    order = np.argsort(y)
    return MellinLine(c, y[order], vals[order], werr, werr > tol)


def inverse_line(line: MellinLine, grid) -> GridFunction:
    """Round trip of :func:`mellin_line` (diagnostic only)."""
    n, h = grid.n_points, grid.step
    y = line.y_values
    k = np.rint(y * n * h / (2 * np.pi)).astype(int) % n
    spec = np.empty(n, dtype=complex)
    spec[k] = line.values / (h * np.exp(1j * y * grid.x_min))
    weighted = np.fft.fft(spec) / n
    vals = weighted * np.exp(-line.c * grid.x)
    return GridFunction(grid, vals, line.window_error, line.warning)


def inner_product(f: AnalyticFunction, g: AnalyticFunction, hbar: float = 0.0,
                  eps: float = 1e-13) -> complex:
    """``<f, g>_hbar = int_0^inf t^hbar conj(f(t)) g(t) dt``."""
    return complex(mellin_point(Product(Conj(f), g), hbar + 1.0, eps))


def convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """``(f * g)(t) = int dy/y f(t/y) g(y)`` on the common grid.

    The additive convolution in ``x`` is done with zero padding to ``2n``; the
    result grid point ``x_m`` generally falls between linear-convolution
    indices, so a spectral sub-sample shift is applied.
    """
    if f.grid != g.grid:
        raise ValueError(f"grid mismatch: {f.grid} vs {g.grid}")
    grid = f.grid
    n, h = grid.n_points, grid.step
    L = 2 * n
    F = np.fft.fft(f.values, L)
    G = np.fft.fft(g.values, L)
    # linear index p corresponds to x = 2 x_min + p h; we need x_m = x_min + m h
    offset = -grid.x_min / h
    base = math.floor(offset)
    frac = offset - base
    k = np.fft.fftfreq(L, d=1.0 / L)
    if frac:
        phase = np.exp(2j * np.pi * k * frac / L)
        if L % 2 == 0:
            phase[L // 2] = math.cos(math.pi * frac)
        spec = F * G * phase
    else:
        spec = F * G
    full = np.fft.ifft(spec) * h
    vals = full[base: base + n]
    wrap = float(max(abs(full[(base + n) % L]), abs(full[(base - 1) % L])))
    return GridFunction(grid, vals, max(f.window_error, g.window_error, wrap),
                        f.flagged or g.flagged)


# ---------------------------------------------------------------------------
# even Fourier transform of F(x) = f(|x|^lam)


def _upper_log_cut(f: AnalyticFunction, rel_tol: float = 1e-22) -> float:
    """``ln t`` beyond which ``|f|`` is negligible next to its size on ``t >= e^-5``."""
    if f.support is not None and np.isfinite(f.support[1]):
        return math.log(f.support[1])
    x = np.arange(-5.0, 350.5, 0.5)
    with np.errstate(all="ignore"):
        vals = np.abs(f(np.exp(x)))
    vals = np.where(np.isfinite(vals), vals, 0.0)
    keep = np.nonzero(vals > rel_tol * np.max(vals))[0]
    return float(x[keep[-1]] + 0.5) if keep.size else 0.0


def _cosine_integrals(f: AnalyticFunction, lam: float, xi: np.ndarray, K: int, P, eps: float):
    """``2 int_0^inf (D^j P'(D) f)(x^lam) cos(2 pi x xi) dx`` for ``j <= K``."""
    X = math.exp(_upper_log_cut(f) / lam)

    def integrand(x, idx):
        xs = x[:, 0]
        with np.errstate(divide="ignore"):
            vals = f.jets(xs**lam, K, P)  # (K+1, n)
        vals = np.where(np.isfinite(vals), vals, 0.0)
        c = np.cos(2 * np.pi * np.outer(xs, xi[idx]))  # (n, m)
        return 2 * vals.T[:, None, :] * c[:, :, None]

    res = tanh_sinh(integrand, np.zeros(xi.size), np.full(xi.size, X), rtol=eps,
                    noise=1e-16, max_level=16)
    return res.value  # (m, K+1)


def fourier_even(f: AnalyticFunction, lam: float, p, eps: float = 1e-13):
    """``2 int_0^inf f(x^lam) cos(2 pi x p) dx``.

    Raises
    ------
    MellinStripError
        If ``f`` does not decay at infinity or ``f(x^lam)`` is not integrable at 0.
    """
    if f.order_inf is None or lam * f.order_inf <= 1:
        raise MellinStripError("f(|x|^lam) is not integrable at infinity")
    if f.order0 is None or lam * f.order0 <= -1:
        raise MellinStripError("f(|x|^lam) is not integrable at 0")
    p_arr = np.atleast_1d(np.asarray(p, dtype=float))
    vals = _cosine_integrals(f, float(lam), np.abs(p_arr.ravel()), 0, ONE, eps)[:, 0]
    vals = vals.reshape(p_arr.shape)
    return vals if np.ndim(p) else complex(vals[0])


def _smooth_even(f: AnalyticFunction, lam: float) -> bool:
    """True when ``f(|x|^lam)`` is smooth at ``x = 0`` (known leaf families only)."""
    from .funcspace import PowExp

    def even_int(v):
        v = float(v)
        return v >= 0 and abs(v - round(v)) < 1e-14 and round(v) % 2 == 0

    if isinstance(f, PowExp):
        return f.p > 0 and even_int(lam * f.sigma) and even_int(lam * f.p)
    return f.order0 == INF


class FourierEvenFn(AnalyticFunction):
    """``xi -> 2 int_0^inf f(x^lam) cos(2 pi x xi) dx`` as a function on ``(0, inf)``.

    Jets use ``D_xi -> -1 - lam D`` under the integral (integration by parts).
    """

    def __init__(self, f: AnalyticFunction, lam: float, eps: float = 1e-13):
        if f.order_inf is None or f.order_inf != INF:
            raise MellinStripError("the even Fourier transform needs rapid decay at infinity")
        self.f, self.lam, self.eps = f, float(lam), eps
        self.order0 = 0.0
        if _smooth_even(f, lam):
            self.order_inf = INF
        else:
            first = f.order0 if (f.order0 is not None and f.order0 > 0 and f.order0 != INF) else 1.0
            self.order_inf = 1.0 + self.lam * first

        self._asym = self._asymptotic_terms()
        self._xi_cut = math.inf
        if self.order_inf == INF:
            # quadrature values level off near roundoff, so stop probing once the
            # transform is that small relative to G(0); beyond that G is set to 0
            ref = abs(complex(self(np.array([1e-12]))[0]))
            hi = 12.0
            for x0 in np.arange(-6.0, 12.0, 2.0):
                x = x0 + np.arange(8) * 0.25
                small = np.nonzero(np.abs(self(np.exp(x))) < 1e-15 * max(ref, 1e-300))[0]
                if small.size:
                    hi = float(x[small[0]])
                    break
            self._xi_cut = math.exp(hi)
            object.__setattr__(self, "_extent_cache", ((1e-22, 350.0, 0.5), (-350.0, hi)))

    def _asymptotic_terms(self):
        """Coefficients ``(A_j, g_j)`` of ``G(xi) ~ sum A_j xi**-g_j`` for large ``xi``.

        Each small-``t`` term ``c t**e`` of a :class:`PowExp` contributes
        ``2 c Gamma(b+1) cos(pi (b+1)/2) / (2 pi xi)**(b+1)`` with ``b = lam e``.
        """
        from .funcspace import PowExp

        f = self.f
        if self.order_inf == INF or not isinstance(f, PowExp) or f.p <= 0:
            return None
        terms = []
        for j in range(80):
            b = self.lam * (float(f.sigma) + float(f.p) * j)
            c = complex(f.coef) * (-f.kappa) ** j / math.factorial(j)
            cosv = math.cos(math.pi * (b + 1) / 2)
            if abs(cosv) < 1e-12:
                continue
            lg = math.lgamma(b + 1) - (b + 1) * math.log(2 * math.pi)
            terms.append((2 * c * cosv * math.exp(lg), b + 1))
        return terms

    def _asymptotic(self, xi, K, P):
        """Asymptotic jets and a mask of points where the series is converged."""
        out = np.zeros((K + 1, xi.size), dtype=complex)
        ok = np.zeros(xi.size, dtype=bool)
        if self._asym is None:
            return out, ok
        lx = np.log(np.maximum(xi, 1e-300))
        prev = np.full(xi.size, np.inf)
        done = np.zeros(xi.size, dtype=bool)
        for A, g in self._asym:
            with np.errstate(over="ignore", invalid="ignore"):
                term = A * np.exp(-g * lx)
            mag = np.abs(term)
            done |= ~(mag <= prev)
            live = ~done
            term = np.where(live, term, 0.0)
            pg = complex(_poly.evaluate(P, -g))
            for k in range(K + 1):
                out[k] += (-g) ** k * pg * term
            ok |= live & (mag <= 1e-17 * np.maximum(np.abs(out[0]), 1e-300))
            prev = np.where(live, mag, prev)
        return out, ok & (xi > 0)

    def tail_moment(self, U, a):
        U = np.asarray(U, dtype=float)
        if self._asym is None:
            return None
        _, ok = self._asymptotic(U, 0, ONE)
        if not np.all(ok):
            return None
        lu = np.log(U)
        tot = np.zeros(U.shape, dtype=complex)
        prev = np.full(U.shape, np.inf)
        done = np.zeros(U.shape, dtype=bool)
        for A, g in self._asym:
            term = A * np.exp((a - g) * lu) / (g - a)
            mag = np.abs(term)
            done |= mag > prev
            tot += np.where(done, 0.0, term)
            prev = np.where(done, prev, mag)
        return tot

    def _jets(self, t, K, P):
        lam_e = _poly.exact(self.lam)
        shape = t.shape
        xi = t.ravel().astype(float)
        out, ok = self._asymptotic(xi, K, P)
        rest = np.nonzero(~ok & (xi < self._xi_cut))[0]
        if rest.size:
            Pf = _poly.affine(P, -1, -lam_e)
            base = np.concatenate([
                _cosine_integrals(self.f, self.lam, xi[rest[i:i + 64]], K, Pf, self.eps)
                for i in range(0, rest.size, 64)
            ])  # (m, K+1)
            out[:, rest] = 0
            for k in range(K + 1):
                for j, w in enumerate(_poly.binomial_mix(-1, -self.lam, k)):
                    if w != 0:
                        out[k, rest] += w * base[:, j]
        return out.reshape((K + 1,) + shape)
