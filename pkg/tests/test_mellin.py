"""Mellin transforms, inner products and grid convolution."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from xiops.funcspace import Bump, LogGaussian, LogGrid, PowerLog, PowExp, sample
from xiops.mellin import (
    MellinStripError,
    convolve,
    inner_product,
    inverse_line,
    mellin_line,
    mellin_point,
    strip,
)
from xiops.operators import ConvFn, Tau


@pytest.mark.parametrize("s", [0.5, 1.0, 2.5, 1 + 3j, 0.2 - 7j])
def test_mellin_of_exponential_is_gamma(s):
    assert abs(mellin_point(PowExp(1.0, 0.0, 1.0, 1.0), s) - gamma(s)) <= 1e-12 * max(1, abs(gamma(s)))


@given(re=st.floats(-2, 2), im=st.floats(-2, 2), rho=st.sampled_from([0.1, 1.0, 10.0]))
@settings(max_examples=40, deadline=None)
def test_log_gaussian_closed_form(re, im, rho):
    s = complex(re, im)
    closed = math.sqrt(math.pi / rho) * np.exp(s * s / (4 * rho))
    assert abs(mellin_point(LogGaussian(1.0, rho), s) - closed) <= 1e-10 * max(1.0, abs(closed))


def test_strip_from_decay_orders():
    assert strip(PowExp(1.0, 0.0, 1.0, 1.0)) == (0.0, math.inf)
    with pytest.raises(MellinStripError):
        mellin_point(PowExp(1.0, 0.0, 1.0, 1.0), -0.5)
    with pytest.raises(MellinStripError):
        mellin_point(PowerLog(1.0, -2.0, 0), 3.0)


def test_power_tail_is_integrated_analytically():
    # t^2 exp(-t) has a power law at 0 extending far past the quadrature window
    f = PowExp(1.0, 2.0, 1.0, 1.0)
    assert abs(mellin_point(f, -1.5 + 0.5j) - gamma(0.5 + 0.5j)) <= 1e-11


@pytest.mark.parametrize("hbar", [-0.5, 0.0, 1.0])
def test_inner_product_is_hermitian(hbar):
    f = LogGaussian(1 + 2j, 1.0, 0.3, 0.1)
    g = PowExp(1.0, 1.0, 1.0, 2.0)
    assert abs(inner_product(f, g, hbar) - np.conj(inner_product(g, f, hbar))) <= 1e-14
    assert inner_product(f, f, hbar).real > 0


@pytest.mark.parametrize("mu", [-1, 2, 0.5])
def test_dilation_behaviour_of_tau(mu):
    f = LogGaussian(1.0, 1.0, 0.2, 0.1)
    s = np.array([0.3 + 1j, -0.5 + 2j])
    lhs = mellin_point(Tau(0.5, mu).on(f), s)
    rhs = mellin_point(f, 1.5 + s / mu) / abs(mu)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10)


def test_convolution_theorem_pointwise():
    f, g = LogGaussian(1.0, 1.0, 0.2, 0.1), LogGaussian(1.0, 0.5, -0.3, 0.4)
    s = np.array([1.2 + 0.5j, 0.3 - 2j])
    np.testing.assert_allclose(mellin_point(ConvFn(f, g), s), mellin_point(f, s) * mellin_point(g, s), rtol=1e-10)


def test_grid_convolution_matches_pointwise_convolution():
    grid = LogGrid.symmetric(12.0, 4096)
    f, g = LogGaussian(1.0, 1.0, 0.2, 0.1), PowExp(1.0, 1.0, 1.0, 1.0)
    gc = convolve(sample(f, grid), sample(g, grid))
    idx = np.arange(1500, 2600, 137)
    exact = ConvFn(f, g)(grid.t[idx])
    np.testing.assert_allclose(gc.values[idx], exact, atol=1e-12)


def test_convolution_rejects_grid_mismatch():
    a = sample(LogGaussian(1.0, 1.0), LogGrid.symmetric(12.0, 1024))
    b = sample(LogGaussian(1.0, 1.0), LogGrid.symmetric(10.0, 1024))
    with pytest.raises(ValueError):
        convolve(a, b)


def test_line_values_agree_with_point_values():
    grid = LogGrid.symmetric(20.0, 4096)
    f = LogGaussian(1.0, 1.0, 0.2, 0.1)
    line = mellin_line(sample(f, grid), 0.5)
    mask = np.abs(line.y_values) < 5
    np.testing.assert_allclose(line.values[mask], mellin_point(f, 0.5 + 1j * line.y_values[mask]), atol=1e-12)
    assert not line.warning


def test_line_round_trip():
    grid = LogGrid.symmetric(12.0, 1024)
    gf = sample(Bump(0.5, 3.0), grid)
    back = inverse_line(mellin_line(gf, 0.3), grid)
    np.testing.assert_allclose(back.values, gf.values, atol=1e-13)
