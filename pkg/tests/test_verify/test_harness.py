from __future__ import annotations

import math
from dataclasses import replace

import pytest

from bohr_lab.errors import ParameterError
from bohr_lab.families import INF
from bohr_lab.radius import HMode, RadiusProblem, Variant, find_radius
from bohr_lab.verify import (
    CertificationConfig,
    load_suite,
    run_suite,
    standard_problems,
)
from bohr_lab.verify.harness import (
    Task,
    build_tasks,
    execute_tasks,
    merge_margins,
    problem_from_mapping,
    problem_tasks,
    sample_seed,
)

PROBLEMS = [RadiusProblem.thm1(1.0, 1, INF), RadiusProblem.thm4(0.5, 1, INF)]


def test_sample_seeds_are_stable_and_distinct() -> None:
    assert sample_seed(42, 0, 0) == sample_seed(42, 0, 0)
    seeds = {sample_seed(42, check, i) for check in range(3) for i in range(10)}
    assert len(seeds) == 30
    assert sample_seed(43, 0, 0) != sample_seed(42, 0, 0)


def test_standard_problems_cover_every_theorem() -> None:
    problems = standard_problems()
    assert len(problems) == 12
    counts = {variant: 0 for variant in Variant}
    for problem in problems:
        counts[problem.variant] += 1
    assert set(counts.values()) == {4}
    assert any(p.h.mode is HMode.AFFINE for p in problems)


def test_problem_tasks_layout(small_cfg: CertificationConfig) -> None:
    problem = PROBLEMS[1]
    tasks = problem_tasks(small_cfg, 9, problem, find_radius(problem))
    assert len(tasks) == small_cfg.samples + 2
    assert tasks[0].parameters["sample"] == "extremal"
    assert {t.check_id for t in tasks[:-1]} == {"thm4_inequality"}
    assert tasks[-1].check_id == "sharpness"


def test_problem_tasks_reject_scaled_radius_beyond_pole() -> None:
    problem = RadiusProblem.thm4(0.5, 1, INF)
    cfg = CertificationConfig(samples=1, radius_scale=10.0)
    with pytest.raises(ParameterError):
        problem_tasks(cfg, 0, problem, find_radius(problem))


def test_execute_tasks_keeps_order() -> None:
    tasks = [Task("t", {"i": i}, lambda i=i: float(i)) for i in range(20)]
    assert execute_tasks(tasks, 4) == [float(i) for i in range(20)]


def test_merge_margins() -> None:
    tasks = [
        Task("b", {"i": 0}, lambda: 0.0),
        Task("a", {"i": 1}, lambda: 0.0),
        Task("b", {"i": 2}, lambda: 0.0),
    ]
    report = merge_margins(tasks, [-1.0, 0.5, -0.25], tolerance=1e-9)
    assert report.checks_run == 3
    assert not report.passed
    assert report.worst_margin == 0.5
    assert list(report.worst_by_check) == ["b", "a"]
    assert report.worst_by_check["b"] == -0.25
    assert [v.parameters for v in report.violations] == [{"i": 1}]

    empty = merge_margins([], [], tolerance=0.0)
    assert empty.passed
    assert empty.worst_margin == -math.inf


def test_run_suite_passes_and_is_deterministic(small_cfg: CertificationConfig) -> None:
    first = run_suite(small_cfg, PROBLEMS)
    again = run_suite(replace(small_cfg, threads=1), PROBLEMS)
    assert first.passed
    assert first.to_dict() == again.to_dict()
    assert {"lemma1", "coeff_bound_pole", "sharpness"} <= set(first.worst_by_check)
    assert first.checks_run == len(build_tasks(small_cfg, PROBLEMS, 1e-12))


def test_run_suite_reports_violation_beyond_the_radius() -> None:
    cfg = CertificationConfig(samples=2, truncation=64, threads=2, radius_scale=1.05)
    report = run_suite(cfg, [RadiusProblem.thm1(1.0, 1, INF)])
    assert not report.passed
    extremal = [
        v
        for v in report.violations
        if v.check_id == "thm1_inequality" and v.parameters["sample"] == "extremal"
    ]
    assert len(extremal) == 1
    assert extremal[0].margin > 0


def test_report_to_dict_is_plain_data() -> None:
    report = merge_margins([Task("x", {"a": 1}, lambda: 0.0)], [2.0], 0.0)
    data = report.to_dict()
    assert data["passed"] is False
    assert data["violations"] == [
        {"check_id": "x", "parameters": {"a": 1}, "margin": 2.0}
    ]


def test_problem_from_mapping() -> None:
    problem = problem_from_mapping(
        {"thm": 2, "alpha": 1.5, "N": 2, "m0": "inf", "m1": 1, "m2": 3, "h": "2*n+1"}
    )
    assert problem.variant is Variant.THM2
    assert problem.m0 == INF
    assert (problem.m1, problem.m2) == (1, 3)
    assert problem.h.describe() == "2*n+1"

    pole = problem_from_mapping({"thm": 4, "p": 0.5, "N": 1, "m0": float("inf")})
    assert pole.family.p == 0.5

    for bad in (
        {"thm": 3, "alpha": 1.5, "N": 1},
        {"thm": 1, "alpha": 1.5},
        {"thm": 1, "alpha": "wide", "N": 1},
        {"thm": 1, "alpha": 1.5, "N": 1, "m0": 2.5},
        ["thm", 1],
    ):
        with pytest.raises(ParameterError):
            problem_from_mapping(bad)


def test_load_suite(tmp_path) -> None:
    suite = tmp_path / "suite.yaml"
    suite.write_text(
        "samples: 3\n"
        "seed: 7\n"
        "truncation: 32\n"
        "problems:\n"
        "  - {thm: 1, alpha: 1.5, N: 1, m0: 2}\n"
        "  - {thm: 4, p: 0.25, N: 2, m0: .inf}\n"
    )
    cfg, problems = load_suite(suite)
    assert (cfg.samples, cfg.seed, cfg.truncation) == (3, 7, 32)
    assert [p.variant for p in problems] == [Variant.THM1, Variant.THM4]
    assert problems[1].m0 == INF


def test_load_suite_defaults_to_standard_problems(tmp_path) -> None:
    suite = tmp_path / "suite.yaml"
    suite.write_text("seed: 1\n")
    cfg, problems = load_suite(suite)
    assert cfg.seed == 1
    assert len(problems) == 12


@pytest.mark.parametrize(
    "content",
    ["unknown_key: 1\n", "samples: [1, 2]\n", "samples: 0\n", "- 1\n", "a: [\n"],
)
def test_load_suite_rejects_bad_files(tmp_path, content: str) -> None:
    suite = tmp_path / "suite.yaml"
    suite.write_text(content)
    with pytest.raises(ParameterError):
        load_suite(suite)


def test_load_suite_missing_file(tmp_path) -> None:
    with pytest.raises(ParameterError):
        load_suite(tmp_path / "absent.yaml")
