from __future__ import annotations

import csv
import io
import json

import pytest

from bohr_lab import families
from bohr_lab.cli import main as cli_main
from bohr_lab.cli.commands import CliConfig
from bohr_lab.errors import NoSignChange, ParameterError

POLE_HALF_RADIUS = 0.1458980337503155


def _run(capsys: pytest.CaptureFixture[str], args: list[str]) -> tuple[int, str]:
    code = cli_main.main(args)
    return code, capsys.readouterr().out


def test_radius_json_record(capsys: pytest.CaptureFixture[str]) -> None:
    code, out = _run(capsys, ["radius", "--thm", "1", "--alpha", "2", "--m0", "inf"])
    record = json.loads(out)

    assert code == 0
    assert list(record)[:12] == [
        "variant",
        "alpha",
        "N",
        "m0",
        "m1",
        "m2",
        "h",
        "root",
        "reported_radius",
        "capped",
        "residual",
        "closed_form",
    ]
    assert record["variant"] == "thm1"
    assert record["m0"] == "inf"
    assert record["reported_radius"] == pytest.approx(0.171572875254, abs=1e-10)
    assert record["bracket_lo"] <= record["root"] <= record["bracket_hi"]


def test_radius_for_pole_family(capsys: pytest.CaptureFixture[str]) -> None:
    code, out = _run(
        capsys, ["radius", "--thm", "4", "--p", "0.5", "--N", "1", "--m0", "inf"]
    )
    assert code == 0
    record = json.loads(out)
    assert record["p"] == 0.5
    assert record["reported_radius"] == pytest.approx(POLE_HALF_RADIUS, abs=1e-10)


def test_radius_convex_case_as_text(capsys: pytest.CaptureFixture[str]) -> None:
    code, out = _run(
        capsys, ["radius", "--thm", "1", "--alpha", "1", "--format", "text"]
    )
    assert code == 0
    assert "reported_radius" in out
    assert "0.33333333333" in out


def test_radius_writes_output_file(
    capsys: pytest.CaptureFixture[str], tmp_path
) -> None:
    target = tmp_path / "radius.json"
    code, out = _run(
        capsys,
        ["radius", "--thm", "2", "--alpha", "1.5", "--m0", "1", "--m1", "1",
         "--m2", "1", "--h", "2*n+1", "--output", str(target)],
    )
    assert code == 0
    assert out == ""
    record = json.loads(target.read_text(encoding="utf-8"))
    assert record["h"] == "2*n+1"
    assert record["closed_form"] is None


def test_radius_output_is_reproducible(capsys: pytest.CaptureFixture[str]) -> None:
    args = ["radius", "--thm", "1", "--alpha", "1.5", "--N", "2", "--m0", "3"]
    _, first = _run(capsys, args)
    _, second = _run(capsys, args)
    assert first == second


def test_coeffs_csv(capsys: pytest.CaptureFixture[str]) -> None:
    code, out = _run(capsys, ["coeffs", "--alpha", "2", "--n-min", "1", "--n-max", "5"])
    assert code == 0
    assert out == "n,coefficient\n1,1\n2,2\n3,3\n4,4\n5,5\n"

    _, convex = _run(capsys, ["coeffs", "--alpha", "1", "--n-max", "5"])
    assert convex.splitlines()[1:] == [f"{n},1" for n in range(1, 6)]

    _, pole = _run(capsys, ["coeffs", "--p", "0.5", "--n-min", "2", "--n-max", "2"])
    assert pole == "n,coefficient\n2,2.5\n"


def test_scan_flags_the_root(capsys: pytest.CaptureFixture[str]) -> None:
    code, out = _run(
        capsys, ["scan", "--thm", "1", "--alpha", "1", "--points", "11"]
    )
    rows = list(csv.DictReader(io.StringIO(out)))

    assert code == 0
    assert len(rows) == 12
    roots = [row for row in rows if row["root"] == "true"]
    assert len(roots) == 1
    assert 0.33 < float(roots[0]["x"]) < 0.34
    xs = [float(row["x"]) for row in rows]
    assert xs == sorted(xs)


@pytest.mark.parametrize(
    "args",
    [
        ["radius", "--thm", "4", "--alpha", "1.5"],
        ["radius", "--thm", "1", "--p", "0.5"],
        ["radius", "--thm", "1", "--alpha", "3"],
        ["radius", "--thm", "1", "--alpha", "1.5", "--m0", "0"],
        ["radius", "--thm", "2", "--alpha", "1.5", "--h", "n-1"],
        ["radius", "--thm", "1", "--alpha", "1.5", "--tol", "0"],
        ["coeffs", "--alpha", "1.5", "--n-min", "5", "--n-max", "2"],
        ["scan", "--thm", "1", "--alpha", "1.5", "--points", "1"],
        ["verify", "--samples", "0"],
    ],
)
def test_invalid_parameters_exit_2(
    capsys: pytest.CaptureFixture[str], args: list[str]
) -> None:
    code, out = _run(capsys, args)
    assert code == 2
    assert out == ""


def test_argparse_errors_exit_2() -> None:
    with pytest.raises(SystemExit) as excinfo:
        cli_main.main(["radius", "--thm", "1", "--alpha", "1", "--p", "0.5"])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit) as excinfo:
        cli_main.main(["radius", "--thm", "3", "--alpha", "1"])
    assert excinfo.value.code == 2


def test_solver_failures_exit_3(monkeypatch: pytest.MonkeyPatch) -> None:
    def failing(cfg: CliConfig, settings) -> int:
        raise NoSignChange("no sign change", lo_value=-1.0, hi_value=-1.0)

    monkeypatch.setattr(cli_main, "cmd_radius", failing)
    assert cli_main.main(["radius", "--thm", "1", "--alpha", "1.5"]) == 3


def test_invalid_environment_exits_2(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("BOHR_LAB_LOG_LEVEL", "LOUD")
    assert cli_main.main(["coeffs", "--alpha", "1"]) == 2


def test_cli_dispatches_verify(monkeypatch: pytest.MonkeyPatch) -> None:
    captured = {}

    def fake_verify(cfg: CliConfig, settings) -> int:
        captured["cfg"] = cfg
        return 1

    monkeypatch.setattr(cli_main, "cmd_verify", fake_verify)
    code = cli_main.main(
        ["verify", "--seed", "7", "--samples", "3", "--radius-scale", "1.05"]
    )

    assert code == 1
    cfg = captured["cfg"]
    assert (cfg.seed, cfg.samples, cfg.radius_scale) == (7, 3, 1.05)
    assert cfg.fmt == "json"


def test_verify_runs_a_suite_file(
    capsys: pytest.CaptureFixture[str], tmp_path
) -> None:
    suite = tmp_path / "suite.yaml"
    suite.write_text(
        "samples: 2\ntruncation: 32\nthreads: 2\n"
        "problems:\n  - {thm: 1, alpha: 1.0, N: 1, m0: inf}\n"
    )
    code, out = _run(capsys, ["verify", "--suite", str(suite), "--seed", "5"])
    report = json.loads(out)

    assert code == 0
    assert report["passed"] is True
    assert "thm1_inequality" in report["worst_by_check"]

    code, out = _run(
        capsys, ["verify", "--suite", str(suite), "--radius-scale", "1.05"]
    )
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_selftest_subset(capsys: pytest.CaptureFixture[str]) -> None:
    code, out = _run(
        capsys, ["selftest", "--only", "3", "--only", "1", "--format", "json"]
    )
    rows = json.loads(out)
    assert code == 0
    assert [row["criterion"] for row in rows] == [1, 3]
    assert all(row["passed"] for row in rows)


def test_selftest_detects_tampered_recurrence(
    capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch
) -> None:
    original = families.coeff_A
    monkeypatch.setattr(
        families, "coeff_A", lambda alpha, n: original(alpha, n) + 1e-6
    )
    code, out = _run(capsys, ["selftest", "--only", "4", "--format", "csv"])
    assert code == 1
    assert "false" in out


def test_cli_config_validation() -> None:
    with pytest.raises(ParameterError):
        CliConfig(command="radius", thm=1)
    with pytest.raises(ParameterError):
        CliConfig(command="radius", thm=1, alpha=1.5, p=0.5)
    with pytest.raises(ParameterError):
        CliConfig(command="plot")
    cfg = CliConfig(command="radius", thm=2, alpha=1.5, m0="2", h="2*n+1")
    problem = cfg.problem()
    assert problem.m0 == 2
    assert problem.h.beta == 2
