"""Acceptance battery behind `bohr-lab selftest`.

One function per criterion; each returns a CriterionResult and never raises
for a numerical failure. Reference values come from independent oracles:
numpy polynomial roots, scipy binomial coefficients and plain quadratic
formulas.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable

import numpy as np
from scipy.special import binom

from bohr_lab import families
from bohr_lab.errors import BohrLabError, ParameterError
from bohr_lab.families import INF
from bohr_lab.radius import (
    RadiusProblem,
    VanishingOrderSpec,
    classical_br_radius,
    evaluate_grid,
    find_radius,
)
from bohr_lab.verify.checks import CertificationConfig, sharpness_scan
from bohr_lab.verify.harness import (
    Task,
    coeff_bound_tasks,
    execute_tasks,
    lemma_tasks,
    problem_tasks,
    standard_problems,
)

logger = logging.getLogger("bohr_lab.verify.acceptance")

CLOSED_FORM_TOL = 1e-10
COEFF_REL_TOL = 1e-12
PROPERTY_TOL = 1e-9
CROSSING_TOL = 1e-9
MONOTONE_TOL = -1e-13
ACCEPTANCE_TRUNCATION = 128

SWEEP_ALPHAS = (1.0, 1.5, 2.0)
SWEEP_PS = (0.25, 0.5, 0.75)
SWEEP_NS = (1, 2, 5)
SWEEP_ORDERS = (1, 2, INF)

CRITERION_TITLES = {
    1: "Closed-form opening-angle radii",
    2: "Closed-form pole radii",
    3: "Classical radius",
    4: "Coefficient oracle",
    5: "Sharpness crossings",
    6: "Coefficient-tail samples",
    7: "Pole coefficient bound",
    8: "Theorem inequalities at 90%",
    9: "Monotone radius functions",
}


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one acceptance criterion."""

    number: int
    title: str
    passed: bool
    detail: str


def _result(number: int, passed: bool, detail: str) -> CriterionResult:
    return CriterionResult(number, CRITERION_TITLES[number], bool(passed), detail)


def binomial_coefficient_oracle(alpha: float, n: int) -> float:
    """A_n from the Cauchy product of (1+z)^α and (1−z)^{−α}."""
    k = np.arange(n + 1)
    c_n = np.sum(binom(alpha, k) * binom(alpha + n - k - 1, n - k))
    return float(c_n / (2.0 * alpha))


def pole_quadratic_root(p: float) -> float:
    """Smaller root of p r² − 2(p² + p + 1) r + p = 0, via numpy.roots."""
    roots = np.roots([p, -2.0 * (p * p + p + 1.0), p])
    return float(np.min(roots.real))


def criterion_closed_form_alpha(cfg: CertificationConfig) -> CriterionResult:
    """Opening-angle radii against (2^{1/α} − 1)/(2^{1/α} + 1)."""
    worst = 0.0
    for alpha in (1.0, 1.1, 1.25, 1.5, 1.75, 2.0):
        t = 2.0 ** (1.0 / alpha)
        expected = (t - 1.0) / (t + 1.0)
        result = find_radius(RadiusProblem.thm1(alpha, 1, INF))
        worst = max(worst, abs(result.reported_radius - expected))
    convex = find_radius(RadiusProblem.thm1(1.0, 1, INF)).root
    koebe = find_radius(RadiusProblem.thm1(2.0, 1, INF)).root
    koebe_expected = 3.0 - 2.0 * math.sqrt(2.0)
    worst = max(worst, abs(convex - 1.0 / 3.0), abs(koebe - koebe_expected))
    return _result(1, worst <= CLOSED_FORM_TOL, f"max error {worst:.3e}")


def criterion_closed_form_pole(cfg: CertificationConfig) -> CriterionResult:
    """Pole radii against the smaller root of the quadratic."""
    worst = 0.0
    below_pole = True
    for p in (0.25, 0.5, 0.75):
        result = find_radius(RadiusProblem.thm4(p, 1, INF))
        worst = max(worst, abs(result.root - pole_quadratic_root(p)))
        below_pole = below_pole and result.root < p
    return _result(
        2,
        worst <= CLOSED_FORM_TOL and below_pole,
        f"max error {worst:.3e}, root < p: {below_pole}",
    )


def criterion_classical(cfg: CertificationConfig) -> CriterionResult:
    """Classical radius for N = 1 against √5 − 2."""
    error = abs(classical_br_radius(1) - (math.sqrt(5.0) - 2.0))
    return _result(3, error <= CLOSED_FORM_TOL, f"error {error:.3e}")


def criterion_coefficients(cfg: CertificationConfig) -> CriterionResult:
    """Recurrence coefficients against the binomial-convolution oracle."""
    worst = 0.0
    for alpha in (1.0, 1.25, 1.5, 1.75, 2.0):
        for n in range(1, 61):
            oracle = binomial_coefficient_oracle(alpha, n)
            error = abs(families.coeff_A(alpha, n) - oracle) / abs(oracle)
            worst = max(worst, error)
    exact = max(
        max(abs(families.coeff_A(1.0, n) - 1.0) for n in range(1, 61)),
        max(abs(families.coeff_A(2.0, n) - n) for n in range(1, 61)),
    )
    return _result(
        4,
        worst <= COEFF_REL_TOL and exact <= COEFF_REL_TOL,
        f"max relative error {worst:.3e}, special-case error {exact:.3e}",
    )


def criterion_sharpness(cfg: CertificationConfig) -> CriterionResult:
    """Sign crossings at root ± ε for the standard problems."""
    failures = []
    closest = math.inf
    for problem in standard_problems():
        below, above = sharpness_scan(problem, cfg.epsilon, cfg)
        closest = min(closest, -below, above)
        if not (below < -CROSSING_TOL and above > CROSSING_TOL):
            failures.append(problem.variant.value)
    return _result(
        5,
        not failures,
        f"smallest |margin| {closest:.3e}, failed: {failures or 'none'}",
    )


def _threads(cfg: CertificationConfig) -> int:
    return cfg.threads or 1


def _property_result(
    number: int, tasks: list[Task], cfg: CertificationConfig
) -> CriterionResult:
    margins = execute_tasks(tasks, _threads(cfg))
    worst = max(margins, default=-math.inf)
    bad = sum(margin > PROPERTY_TOL for margin in margins)
    return _result(
        number,
        bad == 0,
        f"{len(margins)} samples, worst margin {worst:.3e}, violations {bad}",
    )


def criterion_lemma(cfg: CertificationConfig) -> CriterionResult:
    """500 coefficient-tail comparisons."""
    settings = replace(cfg, samples=500, truncation=ACCEPTANCE_TRUNCATION)
    return _property_result(6, lemma_tasks(settings, 0), cfg)


def criterion_pole_bound(cfg: CertificationConfig) -> CriterionResult:
    """200 pole coefficient-bound ratios for n <= 30."""
    settings = replace(cfg, samples=200, truncation=ACCEPTANCE_TRUNCATION)
    return _property_result(7, coeff_bound_tasks(settings, 1), cfg)


def criterion_theorems(cfg: CertificationConfig) -> CriterionResult:
    """100 random inequalities per standard problem at 90% of the radius."""
    settings = replace(
        cfg, samples=100, radius_scale=0.9, truncation=ACCEPTANCE_TRUNCATION
    )
    tasks: list[Task] = []
    for index, problem in enumerate(standard_problems()):
        result = find_radius(problem)
        batch = problem_tasks(settings, 100 + index, problem, result)
        tasks.extend(task for task in batch if task.check_id != "sharpness")
    return _property_result(8, tasks, cfg)


def sweep_problems() -> list[RadiusProblem]:
    """Every (family, N, m0, m1, m2) combination of the monotonicity sweep."""
    identity = VanishingOrderSpec.identity()
    problems = []
    for N in SWEEP_NS:
        for m0 in SWEEP_ORDERS:
            problems.extend(RadiusProblem.thm1(a, N, m0) for a in SWEEP_ALPHAS)
            problems.extend(RadiusProblem.thm4(p, N, m0) for p in SWEEP_PS)
            problems.extend(
                RadiusProblem.thm2(alpha, N, m0, m1, m2, identity)
                for alpha in SWEEP_ALPHAS
                for m1 in SWEEP_ORDERS
                for m2 in SWEEP_ORDERS
            )
    return problems


def criterion_monotonicity(cfg: CertificationConfig) -> CriterionResult:
    """F, G, K strictly increasing on 200-point grids of [0, x_max]."""
    worst = math.inf
    failures = 0
    problems = sweep_problems()
    for problem in problems:
        xs = np.linspace(0.0, problem.x_max, 200).tolist()
        step = float(np.min(np.diff(evaluate_grid(problem, xs))))
        worst = min(worst, step)
        failures += step <= MONOTONE_TOL
    return _result(
        9, failures == 0, f"{len(problems)} grids, smallest step {worst:.3e}"
    )


CRITERIA: dict[int, Callable[[CertificationConfig], CriterionResult]] = {
    1: criterion_closed_form_alpha,
    2: criterion_closed_form_pole,
    3: criterion_classical,
    4: criterion_coefficients,
    5: criterion_sharpness,
    6: criterion_lemma,
    7: criterion_pole_bound,
    8: criterion_theorems,
    9: criterion_monotonicity,
}


def run_acceptance(
    cfg: CertificationConfig | None = None, only: Iterable[int] | None = None
) -> list[CriterionResult]:
    """Run the battery (or the selected criteria) in criterion order.

    A BohrLabError inside a criterion fails that criterion instead of
    aborting the run.

    Raises:
        ParameterError: If `only` names an unknown criterion.

    """
    cfg = cfg or CertificationConfig()
    selected = sorted(set(only)) if only is not None else sorted(CRITERIA)
    unknown = [number for number in selected if number not in CRITERIA]
    if unknown:
        raise ParameterError(f"Unknown acceptance criteria: {unknown}")
    results = []
    for number in selected:
        try:
            result = CRITERIA[number](cfg)
        except BohrLabError as exc:
            result = _result(number, False, str(exc))
        status = "passed" if result.passed else "FAILED"
        logger.info("Criterion %d %s: %s", number, status, result.detail)
        results.append(result)
    return results
