"""Polynomials in the Euler operator ``D = t d/dt``.

Coefficients are stored low-to-high in tuples.  Real parameters are kept as
:class:`fractions.Fraction` so that annihilation identities such as
``(1 + a D) t**(-1/a) = 0`` cancel exactly; complex parameters fall back to
Python complex numbers.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from numbers import Number

Poly = tuple

ONE: Poly = (Fraction(1),)
ZERO: Poly = ()


def exact(x) -> Number:
    """Return an exact representative of a real scalar, complex otherwise."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, complex):
        if x.imag == 0:
            return Fraction(x.real)
        return x
    try:
        return Fraction(float(x))
    except TypeError:
        return complex(x)


def trim(p: Poly) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def scale(p: Poly, c) -> Poly:
    return trim(tuple(c * a for a in p))


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def power(p: Poly, k: int) -> Poly:
    out = ONE
    for _ in range(k):
        out = mul(out, p)
    return out


def affine(p: Poly, c, mu) -> Poly:
    """Return ``p(c + mu X)``."""
    out = ZERO
    base = ONE
    lin = trim((exact(c), exact(mu)))
    for a in p:
        if a != 0:
            out = add(out, scale(base, a))
        base = mul(base, lin)
    return out


def evaluate(p: Poly, x):
    acc = Fraction(0) if not isinstance(x, complex) else 0j
    for a in reversed(p):
        acc = acc * x + a
    return acc


def shift_x(p: Poly, k: int) -> Poly:
    """Return ``X**k * p``."""
    if not p:
        return ZERO
    return (Fraction(0),) * k + tuple(p)


def conj(p: Poly) -> Poly:
    return tuple(a.conjugate() if isinstance(a, complex) else a for a in p)


def degree(p: Poly) -> int:
    return len(trim(p)) - 1


def numeric(p: Poly) -> list:
    out = []
    for a in p:
        if isinstance(a, Fraction):
            out.append(float(a))
        else:
            out.append(complex(a))
    return out


def binomial_mix(c, mu, k: int) -> list:
    """Coefficients of ``(c + mu X)**k`` as numbers."""
    c, mu = complex(c), complex(mu)
    vals = [comb(k, j) * c ** (k - j) * mu**j for j in range(k + 1)]
    if all(v.imag == 0 for v in vals):
        return [v.real for v in vals]
    return vals


def from_operator(alpha=None, delta=None) -> Poly:
    """``1 + alpha X`` or ``2 alpha X + alpha**2 X**2``."""
    if alpha is not None:
        return trim((Fraction(1), exact(alpha)))
    a = exact(delta)
    return trim((Fraction(0), 2 * a, a * a))


def combine(jets, p: Poly):
    """Apply ``p(D)`` given the list of plain jets ``D^i f``."""
    coeffs = numeric(p)
    acc = 0
    for i, c in enumerate(coeffs):
        if c != 0:
            acc = acc + c * jets[i]
    if isinstance(acc, int):
        return 0 * jets[0]
    return acc
