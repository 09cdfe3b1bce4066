"""The named check battery and its report format."""

from __future__ import annotations

import json
import math

import pytest

from xiops.funcspace import Bump, LogGaussian, PowExp, PowerLog
from xiops.operators import Dilation, Hop, SymmetrizedOp
from xiops.verify import (
    CheckReport,
    HypothesisError,
    SuiteConfig,
    check_adjoint,
    check_cohomology,
    check_convolution_compat,
    check_names,
    check_psc,
    check_selfadjoint,
    check_uncertainty,
    reports_to_json,
    run_all,
)


def test_report_pass_flag_follows_tolerance():
    r = CheckReport("x", {}, 1e-9, 1e-8, False, "p")
    assert r.passed
    assert not CheckReport("x", {}, math.inf, 1.0, True, "p").passed


def test_report_json_handles_complex_and_infinite():
    r = CheckReport("x", {"s": 1 + 2j, "bad": math.nan}, math.inf, 0.0, False, "p")
    d = r.to_dict()
    assert d["residual"] is None and d["params"]["s"] == [1.0, 2.0] and d["params"]["bad"] == "nan"
    json.dumps(d)


def test_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig(tol_psc=-1.0)
    with pytest.raises(ValueError):
        SuiteConfig(grid_n=1000)


@pytest.mark.parametrize("hbar,lam", [(-0.5, 4.0), (0.0, 2.0), (1.0, 2.0)])
def test_lambda_is_doubled_into_the_adjoint_domain(hbar, lam):
    assert SuiteConfig().lam_for(hbar) == lam


def test_psc_single_point():
    r = check_psc(PowExp(1.0, 0.0, 1.0, 1.0), 2.0, [1.5 + 2j, 1.0])
    assert r.passed, r


def test_psc_rejects_slow_decay():
    with pytest.raises(HypothesisError):
        check_psc(PowerLog(1.0, -0.3, 0), 2.0, [1.5])


def test_psc_rejects_left_half_plane():
    with pytest.raises(HypothesisError):
        check_psc(PowExp(1.0, 0.0, 1.0, 1.0), 2.0, [-0.5])


def test_adjoint_and_selfadjoint_operations():
    f, g = PowExp(1.0, 0.0, 1.0, 2.0), LogGaussian(1.0, 1.0)
    assert check_adjoint(Hop(3.0), 0.5, f, g).passed
    assert check_adjoint(Dilation(2.0), 0.0, f, g).passed
    assert check_selfadjoint(SymmetrizedOp("Zhat_minus", 2.0, 0.0), f, g).passed
    assert not check_selfadjoint(SymmetrizedOp("Zhat_minus", 2.0, 0.0, 0.1), f, g).passed


def test_uncertainty_needs_one_sided_support():
    with pytest.raises(HypothesisError):
        check_uncertainty(Bump(0.5, 2.0), 2.0, 0.0)
    with pytest.raises(HypothesisError):
        check_uncertainty(LogGaussian(1.0, 1.0), 2.0, 0.0)


def test_uncertainty_reports_slack():
    reps = check_uncertainty(Bump(1.5, 3.0), 2.0, 0.0)
    assert [r.name for r in reps] == ["uncertainty_overlap", "uncertainty_variance", "uncertainty_inequality"]
    assert all(r.passed for r in reps)
    assert reps[2].params["slack"] > 0


def test_cohomology_and_convolution_operations():
    V, f, g = LogGaussian(1.0, 1.0, 0.2, 0.3), LogGaussian(1.0, 1.0), LogGaussian(1.0, 0.5, 0.3, 0.2)
    assert all(r.passed for r in check_cohomology(V, f, g, 0.0))
    assert all(r.passed for r in check_convolution_compat(2.0, 0.0, f, g))


def test_census_has_enough_checks():
    assert len(check_names()) >= 25


def test_filter_and_determinism():
    cfg = SuiteConfig()
    a = reports_to_json(run_all(cfg, "psc*"))
    b = reports_to_json(run_all(cfg, "psc*"))
    assert a == b
    names = [r["name"] for r in json.loads(a)]
    assert names == sorted(names) and all(n.startswith("psc") for n in names)


def test_empty_selection():
    assert run_all(SuiteConfig(checks=())) == []
    assert run_all(SuiteConfig(), "nomatch*") == []


def test_failures_become_reports(monkeypatch):
    from xiops import verify

    def boom(cfg):
        raise RuntimeError("broken")

    monkeypatch.setitem(verify._REGISTRY, "psc", boom)
    (r,) = run_all(SuiteConfig(checks=("psc",)))
    assert not r.passed and "broken" in r.params["error"]


@pytest.mark.parametrize("group", ["selfadjoint_Zsym_plus_h0", "mellin", "commutation"])
def test_perturbed_involution_is_detected(group):
    reps = run_all(SuiteConfig(checks=(group,), tau_shift=0.1))
    assert any(not r.passed for r in reps)


def test_parallel_run_matches_serial():
    groups = ("polyi", "psc", "theta")
    serial = reports_to_json(run_all(SuiteConfig(checks=groups)))
    parallel = reports_to_json(run_all(SuiteConfig(checks=groups, workers=2)))
    assert serial == parallel


def test_shifted_involution_is_still_an_involution():
    # a shifted exponent is the involution for another weight, so this check
    # cannot see the perturbation; the ones above can
    (r,) = run_all(SuiteConfig(checks=("involution",), tau_shift=0.1))
    assert r.passed


def test_report_names_start_with_their_group():
    reps = run_all(SuiteConfig(checks=("commutation", "commutator", "heat", "offline_zero_scan", "projection")))
    assert all(r.name.startswith(r.params["group"]) for r in reps)
