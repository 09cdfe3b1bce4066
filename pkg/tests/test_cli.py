"""Command-line behaviour: outputs, formats and exit codes."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from xiops.cli import CliConfig, fmt, main, read_config


def run(*args):
    proc = subprocess.run([sys.executable, "-m", "xiops", *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_xi_direct_at_half(capsys):
    assert main(["xi", "--s", "0.5,0", "--engine", "direct"]) == 0
    re, im = capsys.readouterr().out.split()
    assert float(re) == pytest.approx(-3.977, abs=1e-3) and im == "0"


def test_xi_integral_at_first_zero(capsys):
    assert main(["xi", "--s", "0.5,14.1347251", "--engine", "integral"]) == 0
    re, im = map(float, capsys.readouterr().out.split())
    assert abs(complex(re, im)) < 1e-6


def test_xi_ibp_matches_direct(capsys):
    main(["xi", "--s", "0.7,3", "--engine", "ibp", "--n", "2"])
    a = complex(*map(float, capsys.readouterr().out.split()))
    main(["xi", "--s", "0.7,3"])
    b = complex(*map(float, capsys.readouterr().out.split()))
    assert abs(a - b) <= 1e-14 * abs(b)


@pytest.mark.parametrize("args", [["xi", "--s", "0.5"], ["xi", "--s", "a,b"], ["zeros", "--t-max", "x"],
                                  ["heat", "--rho", "0"], ["heat", "--rho", "-1"], ["bogus"]])
def test_usage_errors_exit_2(args):
    with pytest.raises(SystemExit) as exc:
        main(args)
    assert exc.value.code == 2


def test_zeros_csv(tmp_path):
    out = tmp_path / "z.csv"
    assert main(["zeros", "--t-max", "30", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "index,ordinate,residual"
    assert [round(float(l.split(",")[1]), 4) for l in lines[1:]] == [14.1347, 21.022, 25.0109]


def test_zeros_none_below_five(capsys):
    assert main(["zeros", "--t-max", "5"]) == 0
    assert capsys.readouterr().out.strip() == "index,ordinate,residual"


def test_zeros_envelope_is_a_failure(capsys):
    assert main(["zeros", "--t-max", "500"]) == 1


def test_zeros_json(capsys):
    assert main(["--format", "json", "zeros", "--t-max", "22"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["index"] for r in rows] == [1, 2]


def test_heat_rows(capsys):
    assert main(["heat", "--m", "1", "--rho", "0.05", "--k-max", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,predicted,located,deviation,residual"
    assert len(lines) == 5
    assert all(float(l.split(",")[3]) <= 1e-6 for l in lines[1:])


def test_heat_center_only(capsys):
    assert main(["heat", "--m", "1", "--rho", "0.05", "--k-max", "0"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 2


def test_weil_with_zero_file(tmp_path, capsys):
    path = tmp_path / "z.csv"
    main(["zeros", "--t-max", "60", "--out", str(path)])
    assert main(["weil", "--function", "loggauss", "--zeros", str(path)]) == 0
    assert float(capsys.readouterr().out) >= -1e-6


def test_weil_empty_file(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text("index,ordinate,residual\n")
    assert main(["weil", "--function", "exp", "--zeros", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_weil_unknown_function(capsys):
    assert main(["weil", "--function", "nope"]) == 2
    assert "loggauss" in capsys.readouterr().err


def test_check_filter(capsys):
    assert main(["check", "--filter", "psc*"]) == 0
    names = [r["name"] for r in json.loads(capsys.readouterr().out)]
    assert names and all(n.startswith("psc") for n in names)


def test_check_no_match(capsys):
    assert main(["check", "--filter", "nomatch*"]) == 0
    out = capsys.readouterr()
    assert json.loads(out.out) == [] and "warning" in out.err


def test_check_operator_expression(capsys):
    assert main(["check", "--op", "(compose (H 3) (Z 2))", "--hbar", "0", "--hbar", "1"]) == 0
    assert len(json.loads(capsys.readouterr().out)) == 10


def test_check_bad_expression():
    assert main(["check", "--op", "(H 2"]) == 2


def test_check_mutation_fails(capsys):
    assert main(["check", "--filter", "mellin_iota", "--tau-shift", "0.1"]) == 1


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "x.cfg"
    cfg.write_text("# settings\nformat = json\nzero_tol = 1e-10\n")
    assert read_config(str(cfg)) == {"format": "json", "zero_tol": 1e-10}
    assert main(["--config", str(cfg), "zeros", "--t-max", "15"]) == 0
    assert json.loads(capsys.readouterr().out)[0]["index"] == 1
    # flags override the file
    assert main(["--config", str(cfg), "--format", "csv", "zeros", "--t-max", "15"]) == 0
    assert capsys.readouterr().out.startswith("index,")


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 3\n")
    assert main(["--config", str(bad), "zeros", "--t-max", "5"]) == 2
    bad.write_text("grid_n = 1000\n")
    assert main(["--config", str(bad), "zeros", "--t-max", "5"]) == 2


def test_cli_config_invariants():
    with pytest.raises(ValueError):
        CliConfig(grid_n=100)
    with pytest.raises(ValueError):
        CliConfig(check_tol=0)


def test_number_format():
    assert fmt(-0.0) == "0"
    assert fmt(1 / 3) == "0.333333333333333"
    assert fmt(1e-20) == "1e-20"


def test_output_is_byte_identical_across_processes():
    a = run("zeros", "--t-max", "40")
    b = run("zeros", "--t-max", "40")
    assert a[0] == 0 and a == b
