"""Command implementations for the bohr-lab CLI.

Each `cmd_*` takes a validated CliConfig plus the environment settings,
writes its report and returns the process exit code. Exceptions are left to
`bohr_lab.cli.main`, which maps them through `report_failure`.
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from bohr_lab.cli.output import emit, render
from bohr_lab.config import BohrLabConfig
from bohr_lab.errors import EXIT_OK, EXIT_VIOLATION, ParameterError
from bohr_lab.families import ConcaveFamily, coeff_A_table, coeff_c_table
from bohr_lab.radius import (
    RadiusProblem,
    RadiusResult,
    Variant,
    evaluate_grid,
    find_radius,
    parse_h_spec,
    parse_order,
)
from bohr_lab.verify import (
    CertificationConfig,
    load_suite,
    run_acceptance,
    run_suite,
    standard_problems,
)

logger = logging.getLogger("bohr_lab.cli")

COMMANDS = ("radius", "coeffs", "scan", "verify", "selftest")
VARIANTS = {1: Variant.THM1, 2: Variant.THM2, 4: Variant.THM4}


@dataclass(frozen=True)
class CliConfig:
    """Validated command-line settings.

    Exactly one of alpha / p is set for commands that need a family, and it
    matches the theorem variant.
    """

    command: str
    fmt: str = "text"
    output: str | None = None
    thm: int | None = None
    alpha: float | None = None
    p: float | None = None
    N: int = 1
    m0: str = "inf"
    m1: str = "inf"
    m2: str = "inf"
    h: str = "n"
    tol: float | None = None
    n_min: int = 1
    n_max: int = 10
    points: int = 101
    suite: str | None = None
    seed: int | None = None
    samples: int | None = None
    radius_scale: float | None = None
    threads: int | None = None
    only: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        """Check cross-field constraints argparse cannot express."""
        if self.command not in COMMANDS:
            raise ParameterError(f"Unknown command {self.command!r}")
        if self.tol is not None and not self.tol > 0:
            raise ParameterError(f"--tol must be > 0, got {self.tol}")
        if self.command in {"radius", "scan", "coeffs"}:
            if (self.alpha is None) == (self.p is None):
                raise ParameterError("Give exactly one of --alpha or --p")
        if self.command in {"radius", "scan"}:
            if self.thm not in VARIANTS:
                raise ParameterError(f"--thm must be 1, 2 or 4, got {self.thm}")
            if (self.thm == 4) != (self.p is not None):
                raise ParameterError("--thm 4 takes --p; --thm 1 and 2 take --alpha")
        if self.command == "coeffs" and not 1 <= self.n_min <= self.n_max:
            raise ParameterError(
                f"Need 1 <= --n-min <= --n-max, got {self.n_min}..{self.n_max}"
            )
        if self.command == "scan" and self.points < 2:
            raise ParameterError(f"--points must be >= 2, got {self.points}")

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> CliConfig:
        """Collect the fields present on a parsed namespace."""
        values = {
            name: getattr(args, name)
            for name in cls.__dataclass_fields__
            if name != "command" and getattr(args, name, None) is not None
        }
        if "only" in values:
            values["only"] = tuple(values["only"])
        return cls(command=args.cmd, **values)

    def family(self) -> ConcaveFamily:
        """Family selected by --alpha or --p."""
        if self.p is not None:
            return ConcaveFamily.pole(self.p)
        if self.alpha is None:
            raise ParameterError("Give exactly one of --alpha or --p")
        return ConcaveFamily.opening_angle(self.alpha)

    def problem(self) -> RadiusProblem:
        """Radius problem described by the flags."""
        if self.thm is None:
            raise ParameterError("--thm is required")
        return RadiusProblem(
            family=self.family(),
            variant=VARIANTS[self.thm],
            N=self.N,
            m0=parse_order(self.m0),
            m1=parse_order(self.m1),
            m2=parse_order(self.m2),
            h=parse_h_spec(self.h),
        )


def radius_record(result: RadiusResult) -> dict[str, Any]:
    """Flat record in output order; m values render as "inf" strings."""
    record: dict[str, Any] = dict(result.problem.describe())
    record.update(
        root=result.root,
        reported_radius=result.reported_radius,
        capped=result.capped,
        residual=result.residual,
        closed_form=result.closed_form,
        bracket_lo=result.bracket[0],
        bracket_hi=result.bracket[1],
        iterations=result.iterations,
    )
    return record


def _tolerance(cfg: CliConfig, settings: BohrLabConfig) -> float:
    return cfg.tol if cfg.tol is not None else settings.tolerance()


def cmd_radius(cfg: CliConfig, settings: BohrLabConfig) -> int:
    """Solve one radius problem and print the result record."""
    problem = cfg.problem()
    result = find_radius(
        problem, _tolerance(cfg, settings), cutoff=settings.truncation()
    )
    record = radius_record(result)
    rows = [{"field": key, "value": value} for key, value in record.items()]
    emit(render(record, cfg.fmt, rows=rows, title="Radius"), cfg.output)
    return EXIT_OK


def cmd_coeffs(cfg: CliConfig, settings: BohrLabConfig) -> int:
    """Print A_n (with --alpha) or c_n(p) (with --p) for n in [n_min, n_max]."""
    family = cfg.family()
    if cfg.p is not None:
        table = coeff_c_table(family.p, cfg.n_max)
    else:
        table = coeff_A_table(family.alpha, cfg.n_max)
    rows = [
        {"n": n, "coefficient": float(table[n])}
        for n in range(cfg.n_min, cfg.n_max + 1)
    ]
    emit(render(rows, cfg.fmt, title="Coefficients"), cfg.output)
    return EXIT_OK


def cmd_scan(cfg: CliConfig, settings: BohrLabConfig) -> int:
    """Tabulate the radius function on [0, x_max] with the root row flagged."""
    problem = cfg.problem()
    tol = _tolerance(cfg, settings)
    cutoff = settings.truncation()
    result = find_radius(problem, tol, cutoff=cutoff)
    grid = np.linspace(0.0, problem.x_max, cfg.points).tolist()
    xs = sorted([*grid, result.root])
    values = evaluate_grid(problem, xs, tol, cutoff)
    root_index = xs.index(result.root)
    rows = [
        {"x": x, "value": value, "root": i == root_index}
        for i, (x, value) in enumerate(zip(xs, values))
    ]
    emit(render(rows, cfg.fmt, title=f"{problem.variant.value} scan"), cfg.output)
    return EXIT_OK


def _certification_settings(cfg: CliConfig) -> tuple[CertificationConfig, list]:
    if cfg.suite is not None:
        cert, problems = load_suite(cfg.suite)
    else:
        cert, problems = CertificationConfig(), standard_problems()
    overrides = {
        name: getattr(cfg, name)
        for name in ("seed", "samples", "radius_scale", "threads")
        if getattr(cfg, name) is not None
    }
    return replace(cert, **overrides), problems


def cmd_verify(cfg: CliConfig, settings: BohrLabConfig) -> int:
    """Run the certification suite; exit 1 on any violation."""
    cert, problems = _certification_settings(cfg)
    if cert.threads is None:
        cert = replace(cert, threads=settings.threads())
    report = run_suite(cert, problems, tol=_tolerance(cfg, settings))
    payload = report.to_dict()
    rows = [
        {"check": check_id, "worst_margin": worst, "passed": worst <= cert.tolerance}
        for check_id, worst in report.worst_by_check.items()
    ]
    emit(render(payload, cfg.fmt, rows=rows, title="Verification"), cfg.output)
    if not report.passed:
        logger.warning("%d violations", len(report.violations))
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_selftest(cfg: CliConfig, settings: BohrLabConfig) -> int:
    """Run the acceptance battery; exit 1 if any criterion fails."""
    cert = CertificationConfig(threads=cfg.threads or settings.threads())
    results = run_acceptance(cert, cfg.only or None)
    rows = [
        {
            "criterion": r.number,
            "title": r.title,
            "passed": r.passed,
            "detail": r.detail,
        }
        for r in results
    ]
    emit(render(rows, cfg.fmt, title="Self-test"), cfg.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION
