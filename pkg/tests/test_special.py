"""Theta-type series, regularizers and the iteration closed forms."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xiops.funcspace import Delta, H, LogGaussian, PowExp
from xiops.special import (
    PSI,
    DomainError,
    ExpPolySeries,
    apply_Delta,
    apply_H,
    funci1_residual,
    iteration_closed_form,
    kernel,
    psi,
    synthetic_funci1,
    theta,
)


def test_psi_against_direct_sum():
    t = np.array([0.05, 0.3, 1.0, 4.0])
    n = np.arange(1, 400)[:, None]
    direct = np.exp(-math.pi * n * n * t).sum(axis=0)
    np.testing.assert_allclose(psi(t), direct, rtol=1e-15, atol=1e-300)


def test_psi_rejects_nonpositive():
    with pytest.raises(DomainError):
        psi(0.0)


@given(x=st.floats(-4, 4))
@settings(max_examples=80, deadline=None)
def test_theta_functional_equation(x):
    t = math.exp(x)
    assert abs(theta(t) - theta(1 / t) / math.sqrt(t)) <= 2e-15 * max(theta(t), 1.0)


def test_truncation_tail_is_below_eps():
    for t in (0.01, 0.3, 2.0):
        N = PSI.truncation(t, 1e-17)
        tail = sum(math.exp(-math.pi * n * n * t) for n in range(N + 1, N + 200))
        assert tail <= 1e-17


def test_series_closed_under_H():
    t = np.array([0.4, 1.0, 2.0])
    expected = psi(t) + 4 * t * (-math.pi) * sum(
        n * n * np.exp(-math.pi * n * n * t) for n in range(1, 60)
    )
    np.testing.assert_allclose(apply_H(PSI, 4)(t), expected, rtol=1e-13)


def test_series_and_function_views_agree():
    t = np.array([0.05, 0.5, 1.0, 3.0])
    s = apply_Delta(PSI, 4, 2)
    f = s.as_function()
    big = t >= 1
    np.testing.assert_allclose(f(t[big]).real, s(t[big]), rtol=1e-13)
    # below one the function view folds through the functional equation; the
    # raw series there cancels down to about 1e-16 absolute
    np.testing.assert_allclose(f(t[~big]).real, s.evaluate_long(t[~big]), rtol=1e-9, atol=1e-15)


def test_series_stays_finite_far_out():
    s = apply_Delta(PSI, 4, 3)
    v = s(np.array([1e3, 1e6, 1e300]))
    assert np.all(v == 0)


def test_extended_evaluation_agrees_with_float():
    s = apply_H(apply_Delta(PSI, 4, 1), 4)
    assert abs(float(s.evaluate_extended(1.2)) - s(np.array([1.2]))[0]) < 1e-13


def test_coefficients_are_exact_rationals():
    s = apply_Delta(PSI, 4, 1)
    assert all(isinstance(c, Fraction) for c in s.coefficients())
    assert s.degree == 2


@pytest.mark.parametrize("n", range(5))
def test_iteration_at_one_for_theta(n):
    v = float(apply_H(apply_Delta(PSI, 4, n), 4).evaluate_extended(1.0))
    assert v == pytest.approx(iteration_closed_form(n, 0, 4, 1.0, "Hpsi", 1), abs=1e-9)


def test_closed_form_values():
    assert iteration_closed_form(0, 0, 4, 1.0, "Hpsi", 1) == -0.5
    for n in range(1, 5):
        assert iteration_closed_form(n, 0, 4, 1.0, "Hpsi", 1) == 0.0


def test_undetermined_value_raises():
    with pytest.raises(ValueError):
        iteration_closed_form(1, 0, 4, 1.0, "psi", 1)
    with pytest.raises(ValueError):
        iteration_closed_form(1, 1, 4, 1.0, "psi", -1)


@pytest.mark.parametrize("m", range(4))
@pytest.mark.parametrize("sign", [1, -1])
def test_synthetic_solutions_satisfy_functional_equation(m, sign):
    f = synthetic_funci1(m, 4, 1.0, sign, LogGaussian(1.0, 0.7, 0.1, 0.3))
    t = np.array([0.3, 0.8, 1.7, 4.0])
    assert np.max(np.abs(funci1_residual(f, m, 4, 1.0, sign, t))) < 1e-12


@pytest.mark.parametrize("m", range(4))
@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("n", range(4))
def test_synthetic_solutions_reproduce_closed_forms(m, sign, n):
    seed = PowExp(1.0, 1.0, 1.0, 1.0)
    f = synthetic_funci1(m, 4, 1.0, sign, seed)
    g = Delta(f, 4, n) if n else f
    for which, h in (("psi", g), ("Hpsi", H(g, 4))):
        try:
            c = iteration_closed_form(n, m, 4, 1.0, which, sign)
        except ValueError:
            continue
        v = complex(h(np.array([1.0]))[0])
        assert abs(v - c) <= 1e-8 * max(1.0, abs(c))


def test_kernel_signs_on_one_to_twenty():
    t = np.linspace(1.0, 20.0, 200)
    assert np.all(apply_Delta(PSI, 4, 1).evaluate_long(t) > 0)
    assert np.all(apply_H(PSI, 4).evaluate_long(t) < 0)


def test_kernel_decays_at_zero():
    k = kernel(4, 1)
    assert k.order0 == math.inf
    assert abs(k(np.array([1e-3]))[0]) < 1e-100


def test_constant_series():
    s = ExpPolySeries((Fraction(2),))
    np.testing.assert_allclose(s(np.array([1.0])), 2 * psi(np.array([1.0])), rtol=1e-15)
