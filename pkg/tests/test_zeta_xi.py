"""Xi engines, zeros, heat flow and Weil sums."""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma, zeta

from xiops.funcspace import PowExp, battery
from xiops.zeta_xi import (
    ZERO_ENVELOPE,
    ContourError,
    DomainError,
    EnvelopeError,
    PoleError,
    ZeroList,
    bisection_zeros,
    count_zeros_rectangle,
    equisym_roots,
    find_critical_zeros,
    gamma_ref,
    heat_xi,
    telescope_closed_form,
    telescope_omega,
    weil_sum,
    weil_term_direct,
    xi_direct,
    xi_ibp,
    xi_integral,
    zeta_ref,
)

# first zeros of zeta on the critical line (standard tables)
KNOWN = [14.134725141734693, 21.022039638771555, 25.010857580145688, 30.424876125859513]


@pytest.mark.parametrize("s", [2.0, 3.5, 0.5 + 10j, 0.3 + 149j, 1.5 - 4j, 1 + 1e-5j])
def test_zeta_reference(s):
    expected = complex(mpmath.zeta(s))
    assert abs(zeta_ref(s) - expected) <= 1e-13 * max(1.0, abs(expected))
    if np.isreal(s):
        assert abs(zeta_ref(s) - zeta(float(np.real(s)))) <= 1e-14 * abs(expected)


def test_zeta_reference_domain():
    with pytest.raises(DomainError):
        zeta_ref(-2.5)


def test_zeta_pole():
    with pytest.raises(PoleError):
        zeta_ref(1.0)


@pytest.mark.parametrize("z", [0.5, 3.2, 1.5 + 2j, -0.7 + 0.3j])
def test_gamma_reference(z):
    assert abs(gamma_ref(z) - gamma(z)) <= 1e-13 * abs(gamma(z))


def test_xi_poles():
    with pytest.raises(PoleError):
        xi_direct(0.0)


def test_xi_value_at_half():
    # pi^(-1/4) Gamma(1/4) zeta(1/2)
    assert xi_direct(0.5) == pytest.approx(-3.97696622550651, rel=1e-13)


@given(a=st.floats(0.05, 0.95), b=st.floats(-20, 20))
@settings(max_examples=30, deadline=None)
def test_engines_agree(a, b):
    z = complex(a, b)
    ref = xi_direct(z)
    assert abs(xi_integral(2 * z - 1) - ref) <= 1e-9
    assert abs(xi_ibp(2 * z - 1, 2) - ref) <= 1e-8


@given(a=st.floats(0.05, 0.95), b=st.floats(-30, 30))
@settings(max_examples=40, deadline=None)
def test_functional_equation(a, b):
    z = complex(a, b)
    assert abs(xi_direct(z) - xi_direct(1 - z)) <= 1e-10 * max(1.0, abs(xi_direct(z)))


def test_integral_engine_pole():
    with pytest.raises(PoleError):
        xi_integral(1.0)


def test_zeros_match_tables():
    zl = find_critical_zeros(31.0)
    np.testing.assert_allclose(zl.ordinates, KNOWN, atol=1e-9)
    np.testing.assert_allclose(bisection_zeros(31.0), KNOWN, atol=1e-8)


def test_no_zeros_below_fourteen():
    assert len(find_critical_zeros(5.0)) == 0


def test_zero_envelope():
    with pytest.raises(EnvelopeError):
        find_critical_zeros(ZERO_ENVELOPE + 1)


def test_zero_list_csv_round_trip(tmp_path):
    zl = find_critical_zeros(26.0)
    path = tmp_path / "z.csv"
    zl.to_csv(path)
    assert path.read_text().splitlines()[0] == "index,ordinate,residual"
    back = ZeroList.from_csv(path)
    np.testing.assert_array_equal(back.ordinates, zl.ordinates)


def test_zero_list_rejects_unsorted():
    with pytest.raises(ValueError):
        ZeroList(np.array([2.0, 1.0]), np.zeros(2))


def test_argument_principle_counts_zeros():
    def xi_shift(s):
        return xi_direct(np.asarray(s))

    assert count_zeros_rectangle(xi_shift, (0.2, 0.8, 10.0, 26.0)) == 3
    assert count_zeros_rectangle(xi_shift, (0.2, 0.8, 1.0, 13.0)) == 0


def test_contour_through_zero_is_rejected():
    with pytest.raises(ContourError):
        count_zeros_rectangle(lambda s: np.asarray(s) - 0.5, (0.5, 1.0, -1.0, 1.0))


def test_heat_flow_satisfies_backward_heat_equation():
    rho, s, dr, ds = 0.5, 0.5 + 0.2j, 1e-3, 1e-2
    d_rho = (heat_xi(rho + dr, s) - heat_xi(rho - dr, s)) / (2 * dr)
    d_ss = (heat_xi(rho, s + ds) - 2 * heat_xi(rho, s) + heat_xi(rho, s - ds)) / ds**2
    assert abs(d_rho + 4 * d_ss) < 1e-5


def test_heat_flow_rejects_nonpositive_rho():
    with pytest.raises(DomainError):
        heat_xi(0.0, 0.5)


@pytest.mark.parametrize("variant", ["plain", "tilde"])
def test_root_lattice(variant):
    for r in equisym_roots(1, 0.05, 3, variant):
        assert abs(r["located"] - r["predicted"]) <= 1e-6


def test_telescope_identity():
    s, rho = 0.4 + 0.7j, 0.3
    lhs = telescope_omega(1, s, rho) - telescope_omega(1, -s, rho)
    assert abs(lhs - telescope_closed_form(1, s, rho)) <= 1e-9


@pytest.mark.parametrize("s", [0.5, 0.2 + 1j])
def test_telescope_without_shift(s):
    lhs = telescope_omega(0, s, 0.3) - telescope_omega(0, 1 - s, 0.3)
    assert abs(lhs - telescope_closed_form(0, s, 0.3)) <= 1e-9


@pytest.mark.parametrize("name", list(battery()))
def test_weil_sum_nonnegative(name):
    zl = find_critical_zeros(80.0).head(20)
    assert weil_sum(battery()[name], zl) >= -1e-6


def test_weil_sum_against_direct_terms():
    f = PowExp(1.0, 0.0, 1.0, 1.0)
    zl = find_critical_zeros(26.0)
    direct = sum(weil_term_direct(f, t) for t in zl.ordinates)
    assert weil_sum(f, zl) == pytest.approx(direct, rel=1e-8, abs=1e-14)


def test_weil_sum_of_empty_list():
    assert weil_sum(battery()["exp"], ZeroList(np.array([]), np.array([]))) == 0.0
