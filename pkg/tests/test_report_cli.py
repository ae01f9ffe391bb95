"""Report semantics, check registry and the command-line front end."""

import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from kahlerverify import cli, suites
from kahlerverify.report import (ConfigError, RunConfig, VerificationReport, failed, judge,
                                 tol_scale_from_env)


# ------------------------------------------------------------------ report

@pytest.mark.parametrize("residual,tol,status", [
    (0.0, 1e-8, "pass"), (1e-8, 1e-8, "pass"), (1.1e-8, 1e-8, "fail"),
    (float("nan"), 1.0, "fail"), (float("inf"), 1.0, "fail")])
def test_judge_passes_iff_residual_within_tolerance(residual, tol, status):
    assert judge("x", "d", "plumbing", 1.0, 1.0, residual, tol).status == status


def test_record_needs_reference():
    with pytest.raises(ValueError):
        judge("x", "d", "", 1.0, 1.0, 0.0, 1.0)


def test_report_exit_code_and_json():
    rep = VerificationReport(config=RunConfig().snapshot())
    rep.checks.append(judge("a", "d", "plumbing", np.float64(1.0), np.array([1.0]), 0.0, 1.0))
    assert rep.exit_code == 0
    rep.checks.append(failed("b", "d", "plumbing", 1.0, RuntimeError("boom")))
    assert rep.exit_code == 1 and rep.summary() == {"pass": 1, "fail": 1, "skipped": 0}
    data = json.loads(rep.to_json())
    assert set(data) == {"run_id", "timestamp", "config", "checks", "summary"}
    assert data["checks"][1]["residual"] == "inf" and "boom" in data["checks"][1]["note"]
    assert "out" not in data["config"]


@pytest.mark.parametrize("kwargs", [dict(m=0.0), dict(samples=0), dict(resolution=0), dict(refine=0),
                                    dict(a=2.0, b=1.0), dict(tol_scale=0.0)])
def test_run_config_validation(kwargs):
    with pytest.raises(ConfigError):
        RunConfig(**kwargs)


def test_tol_scale_from_env():
    assert tol_scale_from_env({}) == 1.0
    assert tol_scale_from_env({"KV_TOL_SCALE": "10"}) == 10.0
    for bad in ("abc", "-1", "0"):
        with pytest.raises(ConfigError):
            tol_scale_from_env({"KV_TOL_SCALE": bad})


# ------------------------------------------------------------------ registry

def test_check_registry():
    ids = [c.id for c in suites.CHECKS]
    assert len(ids) == len(set(ids))
    for c in suites.CHECKS:
        assert c.suite in suites.SUITES and c.id.startswith(c.suite + ".")
        assert c.paper_ref and c.description and c.tolerance >= 0
    assert sum(len(suites.checks_for(s)) for s in suites.SUITES) == len(suites.checks_for("all"))
    with pytest.raises(KeyError):
        suites.checks_for("nonsense")


def test_tolerance_scale_tightens_checks():
    chk = [c for c in suites.CHECKS if c.id == "taub-nut.structure-equations"]
    ok = suites.run_checks(chk, RunConfig())
    assert ok.exit_code == 0
    strict = suites.run_checks(chk, RunConfig(tol_scale=1e-300))
    assert strict.checks[0].status == "fail"
    assert strict.checks[0].tolerance == pytest.approx(chk[0].tolerance * 1e-300)


def test_check_section_is_deterministic():
    chk = [c for c in suites.CHECKS if c.suite == "levi"][:2]
    a = suites.run_checks(chk, RunConfig(samples=32))
    b = suites.run_checks(chk, RunConfig(samples=32))
    assert a.checks_json() == b.checks_json()
    assert a.run_id != b.run_id


# ------------------------------------------------------------------ cli

def test_cli_rejects_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "nonsense"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [["verify", "levi", "--m", "-1"], ["verify", "levi", "--samples", "0"],
                                  ["verify", "ibp", "--a", "3", "--b", "2"],
                                  ["profile", "scalar-g-plus", "--r-min", "1.0"],
                                  ["profile", "scalar-g-plus", "--m", "0"],
                                  ["profile", "scalar-g-plus", "--r-min", "5", "--r-max", "2"]])
def test_cli_configuration_errors(argv, capsys):
    assert cli.main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_cli_bad_tolerance_env(monkeypatch, capsys):
    monkeypatch.setenv("KV_TOL_SCALE", "abc")
    assert cli.main(["verify", "levi"]) == 2


def test_cli_coarse_run_fails(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["verify", "levi", "--samples", "1", "--resolution", "1", "--out", str(out)]) == 1
    data = json.loads(out.read_text())
    assert data["summary"]["fail"] > 0
    assert data["config"]["samples"] == 1


def test_cli_verify_taub_nut(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["verify", "taub-nut", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    ids = {c["id"]: c for c in data["checks"]}
    assert ids["taub-nut.scalar-g-plus"]["status"] == "pass"
    assert all(c["residual"] <= c["tolerance"] for c in data["checks"])
    assert "0 failed" in capsys.readouterr().err


def _profile(capsys, *argv):
    assert cli.main(["profile", *argv]) == 0
    return list(csv.reader(io.StringIO(capsys.readouterr().out)))


def test_profile_scalar_g_plus(capsys):
    rows = _profile(capsys, "scalar-g-plus", "--r-min", "1.5", "--r-max", "10", "--steps", "6")
    assert rows[0][0] == "r" and len(rows) == 7
    for r, s, expected in (map(float, row) for row in rows[1:]):
        assert expected == pytest.approx(96 / (r + 1))
        assert s == pytest.approx(96 / (r + 1), rel=1e-6)


def test_profile_other_quantities(capsys, tmp_path):
    rows = _profile(capsys, "scalar-g-minus", "--steps", "3", "--m", "2")
    assert [float(r[1]) for r in rows[1:]] == pytest.approx([0, 0, 0], abs=1e-6)
    assert float(rows[1][0]) == pytest.approx(3.0) and float(rows[-1][0]) == pytest.approx(20.0)
    rows = _profile(capsys, "ricci-g-minus-eigs", "--r-min", "2", "--r-max", "2", "--steps", "1")
    eta = sorted(float(v) for v in rows[1][1:5])
    mag = 4 * (1 / 3) ** 2
    assert float(rows[1][5]) == pytest.approx(mag)
    assert eta == pytest.approx([-mag, -mag, mag, mag], rel=1e-6)
    out = tmp_path / "w.csv"
    assert cli.main(["profile", "w-plus-eigs", "--r-min", "2", "--r-max", "2", "--steps", "1",
                     "--out", str(out)]) == 0
    row = list(csv.reader(out.open()))[1]
    factor = 8 / 27
    assert float(row[4]) == pytest.approx(factor)
    assert [float(v) for v in row[1:4]] == pytest.approx([-factor, -factor, 2 * factor], rel=1e-6)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "kahlerverify", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "verify" in res.stdout
