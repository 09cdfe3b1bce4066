"""Test functions, decay certificates and log grids."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xiops.funcspace import (
    Bump,
    CallableFunction,
    DecayCertificateError,
    Delta,
    H,
    LogGaussian,
    LogGrid,
    PowerLog,
    PowExp,
    SamplingError,
    battery,
    interpolate,
    project_phi,
    project_tau,
    sample,
    tau,
    verify_decay,
)

T = np.geomspace(0.05, 20.0, 41)


@pytest.mark.parametrize("name", list(battery()))
def test_battery_declares_rapid_decay(name):
    f = battery()[name]
    verify_decay(f)
    assert f.order_inf == math.inf


def test_battery_values():
    b = battery()
    np.testing.assert_allclose(b["exp"](T), np.exp(-T), rtol=4e-15)
    np.testing.assert_allclose(b["gauss"](T), np.exp(-T**2), rtol=4e-15)
    np.testing.assert_allclose(b["loggauss"](T), np.exp(-np.log(T) ** 2), rtol=4e-15)
    np.testing.assert_allclose(b["t2exp"](T), T**2 * np.exp(-T), rtol=4e-15)


def test_bump_support_and_smoothness():
    f = Bump(1.5, 3.0)
    assert f.support == (1.5, 3.0)
    assert np.all(f(np.array([0.5, 1.5, 3.0, 7.0])) == 0)
    assert f(np.array([2.1]))[0].real > 0


@pytest.mark.parametrize(
    "f",
    [PowExp(1.0, 1.0, 0.7, 2.0), LogGaussian(1.0, 0.5, 0.3, 0.2), PowerLog(1.0, -2.0, 2), Bump(0.5, 2.0)],
    ids=["powexp", "loggauss", "powerlog", "bump"],
)
def test_exact_derivative_matches_finite_difference(f):
    t = np.array([0.7, 1.0, 1.3])
    h = 1e-6
    fd = (f(t * (1 + h)) - f(t * (1 - h))) / (2 * h * t)
    np.testing.assert_allclose(f.deriv(t), fd, rtol=1e-7, atol=1e-9)


@pytest.mark.parametrize("alpha", [1.0, 2.0, 4.0])
def test_H_is_one_plus_alpha_D(alpha):
    f = LogGaussian(1.0, 1.0, 0.2, 0.0)
    t = np.array([0.5, 1.0, 2.5])
    expected = f(t) + alpha * t * f.deriv(t)
    np.testing.assert_allclose(H(f, alpha)(t), expected, rtol=1e-13)


def test_H_annihilates_matching_power():
    f = PowerLog(1.0, -0.25, 0)
    np.testing.assert_allclose(H(f, 4)(T), 0, atol=1e-15)


def test_delta_is_H_squared_minus_identity():
    f = PowExp(1.0, 0.0, 1.0, 1.0)
    lhs = Delta(f, 2.0)(T)
    rhs = H(H(f, 2.0), 2.0)(T) - f(T)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-15)


@given(hbar=st.sampled_from([-0.5, 0.0, 0.5, 1.0]), x=st.floats(-3, 3))
@settings(max_examples=60, deadline=None)
def test_tau_is_an_involution(hbar, x):
    t = np.array([math.exp(x)])
    for f in battery().values():
        a = tau(tau(f, hbar), hbar)(t)[0]
        b = f(t)[0]
        assert abs(a - b) <= 1e-13 * max(1.0, abs(b))


@given(x=st.floats(-3, 3))
@settings(max_examples=40, deadline=None)
def test_projections_split_the_function(x):
    t = np.array([math.exp(x)])
    f = PowExp(1.0, 0.5, 1.0, 1.0)
    for proj in (project_phi, lambda g, s: project_tau(g, 0.5, s)):
        total = proj(f, 1)(t) + proj(f, -1)(t)
        # the halves can be much larger than f itself, so compare absolutely
        np.testing.assert_allclose(total, f(t), rtol=1e-14, atol=1e-15)


def test_tau_projection_is_an_eigenvector():
    f = PowExp(1.0, 0.0, 1.0, 1.0)
    for sign in (1, -1):
        p = project_tau(f, 0.0, sign)
        np.testing.assert_allclose(tau(p, 0.0)(T), sign * p(T), rtol=1e-13, atol=1e-300)


def test_false_decay_claim_is_rejected():
    liar = CallableFunction(lambda t: 1.0 / (1.0 + t), order0=0.0, order_inf=math.inf, check=False)
    with pytest.raises(DecayCertificateError):
        verify_decay(liar)


def test_log_grid_validation():
    with pytest.raises(ValueError):
        LogGrid(-1.0, 1.0, 1000)
    with pytest.raises(ValueError):
        LogGrid(0.5, 3.0, 1024)
    g = LogGrid.symmetric(5.0, 256)
    assert g.is_symmetric
    np.testing.assert_allclose(g.x[::-1], -g.x, atol=1e-15)


def test_sample_flags_truncated_window():
    grid = LogGrid.symmetric(2.0, 256)
    gf = sample(PowExp(1.0, 0.0, 1.0, 1.0), grid)
    assert gf.flagged and gf.window_error > 0.1
    ok = sample(LogGaussian(1.0, 1.0), LogGrid.symmetric(12.0, 256))
    assert not ok.flagged


def test_sample_rejects_nonfinite_values():
    bad = CallableFunction(lambda t: np.sqrt(t - 2.0), check=False)
    with pytest.raises(SamplingError):
        sample(bad, LogGrid.symmetric(3.0, 512))


def test_interpolation_is_exact_at_nodes():
    grid = LogGrid.symmetric(6.0, 512)
    gf = sample(LogGaussian(1.0, 1.0), grid)
    np.testing.assert_allclose(interpolate(gf, grid.t[::7]), gf.values[::7], rtol=1e-13)
