"""Seeded, parallel certification suite.

`run_suite` expands a CertificationConfig and a list of radius problems into
independent check tasks, runs them on a thread pool and merges the margins in
task order, so the report does not depend on scheduling.

Every task gets its own seed from `numpy.random.SeedSequence`, keyed by the
root seed, the check index and the sample index.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Callable, Iterator

import numpy as np
import yaml

from bohr_lab.config import build_config
from bohr_lab.errors import ParameterError
from bohr_lab.families import INF, ConcaveFamily, FamilyKind, Order, validate_order
from bohr_lab.radius import (
    RadiusProblem,
    RadiusResult,
    Variant,
    find_radius,
    parse_h_spec,
    parse_order,
)
from bohr_lab.series import SchwarzFunction, schwarz_sample
from bohr_lab.verify.checks import (
    CertificationConfig,
    check_coeff_bound_pole,
    check_distortion,
    check_growth_bound,
    check_lemma1,
    check_schwarz_bound,
    check_schwarz_derivative,
    check_thm1_inequality,
    check_thm2_inequality,
    check_thm4_inequality,
    extremal_margin,
    sharpness_scan,
)

logger = logging.getLogger("bohr_lab.verify")

LEMMA_ALPHAS = (1.0, 1.5, 2.0)
LEMMA_NS = (1, 2, 3)
LEMMA_RADII = (0.1, 0.2, 1.0 / 3.0)
POLE_PS = (0.3, 0.5, 0.7)
POLE_N_MAX = 30
MAX_SAMPLE_ORDER = 3

Parameters = dict[str, Any]


@dataclass(frozen=True)
class Violation:
    """A check instance whose margin exceeded the tolerance."""

    check_id: str
    parameters: Parameters
    margin: float


@dataclass(frozen=True)
class VerificationReport:
    """Merged outcome of a suite run.

    Attributes:
        checks_run: Number of check instances evaluated.
        violations: Instances with margin > tolerance, in task order.
        worst_margin: Largest margin seen over all instances.
        worst_by_check: Largest margin per check id, in first-seen order.

    """

    checks_run: int
    violations: tuple[Violation, ...]
    worst_margin: float
    worst_by_check: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True iff there are no violations."""
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        """Plain-data form for serialization."""
        return {
            "passed": self.passed,
            "checks_run": self.checks_run,
            "worst_margin": self.worst_margin,
            "worst_by_check": dict(self.worst_by_check),
            "violations": [asdict(v) for v in self.violations],
        }


@dataclass(frozen=True)
class Task:
    """One check instance: its id, its parameters and a thunk returning the margin."""

    check_id: str
    parameters: Parameters
    run: Callable[[], float]


def sample_seed(seed: int, check_index: int, sample_index: int) -> int:
    """Deterministic 32-bit seed for one sample of one check."""
    sequence = np.random.SeedSequence([seed, check_index, sample_index])
    return int(sequence.generate_state(1)[0])


def _rngs(
    cfg: CertificationConfig, index: int
) -> Iterator[tuple[int, np.random.Generator]]:
    for i in range(cfg.samples):
        yield i, np.random.default_rng(sample_seed(cfg.seed, index, i))


def _random_schwarz(
    rng: np.random.Generator, m: Order, cfg: CertificationConfig
) -> SchwarzFunction:
    if m == INF:
        return SchwarzFunction.zero()
    factors = int(rng.integers(0, cfg.max_factors + 1))
    return schwarz_sample(int(m), factors, int(rng.integers(2**32)))


def _random_order(rng: np.random.Generator) -> int:
    return int(rng.integers(1, MAX_SAMPLE_ORDER + 1))


def _random_family(rng: np.random.Generator) -> ConcaveFamily:
    if rng.random() < 0.5:
        return ConcaveFamily.opening_angle(float(rng.choice(LEMMA_ALPHAS)))
    return ConcaveFamily.pole(float(rng.choice(POLE_PS)))


def _describe(w: SchwarzFunction) -> Parameters:
    if w.is_zero:
        return {"m": "inf"}
    return {"m": w.vanishing_order, "factors": len(w.factors), "seed": w.seed}


def _family_params(family: ConcaveFamily) -> Parameters:
    return {"family": family.kind.value, "parameter": family.parameter}


def lemma_tasks(cfg: CertificationConfig, index: int) -> list[Task]:
    """Coefficient-tail comparisons for random subordinates of f_α, r <= 1/3."""
    tasks = []
    for _, rng in _rngs(cfg, index):
        alpha = float(rng.choice(LEMMA_ALPHAS))
        N = int(rng.choice(LEMMA_NS))
        r = float(rng.choice(LEMMA_RADII))
        w = _random_schwarz(rng, _random_order(rng), cfg)
        params = {"alpha": alpha, "N": N, "r": r, "w": _describe(w)}
        tasks.append(Task("lemma1", params, partial(check_lemma1, alpha, w, N, r, cfg)))
    return tasks


def _coeff_ratio_margin(
    p: float, w: SchwarzFunction, n_max: int, cfg: CertificationConfig
) -> float:
    return check_coeff_bound_pole(p, w, n_max, cfg) - 1.0


def coeff_bound_tasks(cfg: CertificationConfig, index: int) -> list[Task]:
    """Pole coefficient-bound ratios (as ratio − 1) for random subordinates of k_p."""
    tasks = []
    n_max = min(POLE_N_MAX, cfg.truncation)
    for _, rng in _rngs(cfg, index):
        p = float(rng.choice(POLE_PS))
        w = _random_schwarz(rng, _random_order(rng), cfg)
        params = {"p": p, "n_max": n_max, "w": _describe(w)}
        run = partial(_coeff_ratio_margin, p, w, n_max, cfg)
        tasks.append(Task("coeff_bound_pole", params, run))
    return tasks


def _growth_tasks(cfg: CertificationConfig, index: int) -> list[Task]:
    tasks = []
    for _, rng in _rngs(cfg, index):
        family = _random_family(rng)
        if family.kind is FamilyKind.POLE:
            r = family.p * float(rng.choice((0.25, 0.5, 0.9)))
        else:
            r = float(rng.choice((0.1, 0.2, 1.0 / 3.0, 0.5, 0.8)))
        w = _random_schwarz(rng, _random_order(rng), cfg)
        params = {**_family_params(family), "r": r, "w": _describe(w)}
        run = partial(check_growth_bound, family, w, r, cfg)
        tasks.append(Task("growth_bound", params, run))
    return tasks


def _distortion_tasks(cfg: CertificationConfig, index: int) -> list[Task]:
    tasks = []
    for _, rng in _rngs(cfg, index):
        alpha = float(rng.choice(LEMMA_ALPHAS))
        r = float(rng.choice((0.1, 0.3, 0.5)))
        w = _random_schwarz(rng, _random_order(rng), cfg)
        params = {"alpha": alpha, "r": r, "w": _describe(w)}
        run = partial(check_distortion, alpha, w, r, cfg)
        tasks.append(Task("distortion", params, run))
    return tasks


def _schwarz_tasks(cfg: CertificationConfig, index: int) -> list[Task]:
    tasks = []
    for _, rng in _rngs(cfg, index):
        family = _random_family(rng)
        w = _random_schwarz(rng, _random_order(rng), cfg)
        params = {**_family_params(family), "w": _describe(w)}
        derivative = partial(check_schwarz_derivative, family, w, cfg)
        tasks.append(Task("schwarz_derivative", params, derivative))
        bound = partial(check_schwarz_bound, w, cfg)
        tasks.append(Task("schwarz_bound", {"w": _describe(w)}, bound))
    return tasks


def _theorem_margin(
    problem: RadiusProblem,
    schwarz: tuple[SchwarzFunction, ...],
    r: float,
    cfg: CertificationConfig,
) -> float:
    w0, w, w1, w2 = schwarz
    if problem.variant is Variant.THM1:
        return check_thm1_inequality(problem.family.alpha, w0, w, problem.N, r, cfg)
    if problem.variant is Variant.THM4:
        return check_thm4_inequality(problem.family.p, w0, w, problem.N, r, cfg)
    alpha = problem.family.alpha
    return check_thm2_inequality(alpha, w0, w1, w2, problem.h, problem.N, r, cfg)


def _sharpness_margin(
    problem: RadiusProblem, result: RadiusResult, cfg: CertificationConfig
) -> float:
    below, above = sharpness_scan(problem, cfg.epsilon, cfg, result=result)
    return max(below, -above)


def problem_tasks(
    cfg: CertificationConfig,
    index: int,
    problem: RadiusProblem,
    result: RadiusResult,
) -> list[Task]:
    """Theorem checks at radius_scale × reported radius plus one sharpness scan.

    The first task uses monomial Schwarz functions; the rest are random.
    """
    check_id = f"{problem.variant.value}_inequality"
    base = problem.describe()
    r = cfg.radius_scale * result.reported_radius
    if problem.variant is Variant.THM4 and r >= problem.family.p:
        raise ParameterError(
            f"Scaled radius {r} reaches the pole p = {problem.family.p}"
        )

    extremal = partial(extremal_margin, problem, r, cfg)
    tasks = [Task(check_id, {**base, "r": r, "sample": "extremal"}, extremal)]
    for i, rng in _rngs(cfg, index):
        w0 = _random_schwarz(rng, problem.m0, cfg)
        w = _random_schwarz(rng, _random_order(rng), cfg)
        w1 = _random_schwarz(rng, problem.m1, cfg)
        w2 = _random_schwarz(rng, problem.m2, cfg)
        params = {**base, "r": r, "sample": i, "w0": _describe(w0)}
        if problem.variant is Variant.THM2:
            params.update(w1=_describe(w1), w2=_describe(w2))
        else:
            params["w"] = _describe(w)
        run = partial(_theorem_margin, problem, (w0, w, w1, w2), r, cfg)
        tasks.append(Task(check_id, params, run))

    sharpness = partial(_sharpness_margin, problem, result, cfg)
    tasks.append(Task("sharpness", {**base, "epsilon": cfg.epsilon}, sharpness))
    return tasks


def build_tasks(
    cfg: CertificationConfig, problems: list[RadiusProblem], tol: float
) -> list[Task]:
    """Expand the configuration into the ordered task list.

    Radii are solved here, once per problem, before any task runs.
    """
    generators = (
        lemma_tasks,
        coeff_bound_tasks,
        _growth_tasks,
        _distortion_tasks,
        _schwarz_tasks,
    )
    tasks: list[Task] = []
    for index, generate in enumerate(generators):
        tasks.extend(generate(cfg, index))
    for offset, problem in enumerate(problems):
        result = find_radius(problem, tol)
        tasks.extend(problem_tasks(cfg, len(generators) + offset, problem, result))
    return tasks


def execute_tasks(tasks: list[Task], threads: int) -> list[float]:
    """Run tasks on a thread pool; margins come back in task order."""
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda task: task.run(), tasks))


def merge_margins(
    tasks: list[Task], margins: list[float], tolerance: float
) -> VerificationReport:
    """Fold per-task margins, in task order, into a VerificationReport."""
    violations = []
    worst_by_check: dict[str, float] = {}
    for task, margin in zip(tasks, margins):
        previous = worst_by_check.get(task.check_id, -math.inf)
        worst_by_check[task.check_id] = max(previous, margin)
        if margin > tolerance:
            violations.append(Violation(task.check_id, task.parameters, margin))
            logger.warning(
                "Violation in %s: margin %.3e (%s)",
                task.check_id,
                margin,
                task.parameters,
            )
    for check_id, worst in worst_by_check.items():
        logger.debug("%s worst margin %.3e", check_id, worst)
    return VerificationReport(
        checks_run=len(tasks),
        violations=tuple(violations),
        worst_margin=max(margins, default=-math.inf),
        worst_by_check=worst_by_check,
    )


def run_suite(
    cfg: CertificationConfig,
    problems: list[RadiusProblem] | None = None,
    *,
    tol: float | None = None,
) -> VerificationReport:
    """Run every check and merge the margins into a report.

    Args:
        cfg: Sampling and tolerance settings.
        problems: Radius problems for the theorem and sharpness checks;
            defaults to `standard_problems()`.
        tol: Root-finding tolerance; defaults to the configured one.

    Returns:
        The merged VerificationReport. Equal (cfg, problems) give equal reports.

    """
    settings = build_config()
    problems = standard_problems() if problems is None else problems
    tol = settings.tolerance() if tol is None else tol
    tasks = build_tasks(cfg, problems, tol)
    threads = cfg.threads if cfg.threads is not None else settings.threads()
    logger.info(
        "Running %d checks on %d threads (seed %d)", len(tasks), threads, cfg.seed
    )
    margins = execute_tasks(tasks, threads)
    return merge_margins(tasks, margins, cfg.tolerance)


def standard_problems() -> list[RadiusProblem]:
    """Twelve problems spanning the three theorems.

    N in {1, 2}, finite and infinite orders, identity and 2n+1 vanishing
    orders.
    """
    two_n_plus_one = parse_h_spec("2*n+1")
    return [
        RadiusProblem.thm1(1.0, 1, INF),
        RadiusProblem.thm1(2.0, 1, 1),
        RadiusProblem.thm1(1.5, 2, 2),
        RadiusProblem.thm1(1.25, 1, 1),
        RadiusProblem.thm2(1.0, 1, 1, 1, 1),
        RadiusProblem.thm2(1.5, 2, INF, 1, INF),
        RadiusProblem.thm2(2.0, 1, 2, 1, 3, two_n_plus_one),
        RadiusProblem.thm2(1.25, 2, 2, 1, 2, two_n_plus_one),
        RadiusProblem.thm4(0.5, 1, INF),
        RadiusProblem.thm4(0.25, 2, 1),
        RadiusProblem.thm4(0.75, 1, 2),
        RadiusProblem.thm4(0.5, 2, INF),
    ]


def _order_field(value: Any, name: str) -> Order:
    if isinstance(value, float) and math.isinf(value):
        return INF
    if isinstance(value, str):
        return parse_order(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParameterError(f"{name} must be an integer or 'inf', got {value!r}")
    return validate_order(value, name)


def problem_from_mapping(data: dict[str, Any]) -> RadiusProblem:
    """Build a RadiusProblem from a suite-file entry.

    Keys: thm (1, 2 or 4), alpha or p, N, m0, and for thm 2 also m1, m2, h.
    Missing orders default to inf and a missing h to "n".
    """
    if not isinstance(data, dict):
        raise ParameterError(f"Suite problem must be a mapping, got {data!r}")
    try:
        thm = int(data["thm"])
        N = int(data["N"])
        m0 = _order_field(data.get("m0", "inf"), "m0")
        if thm == 4:
            return RadiusProblem.thm4(float(data["p"]), N, m0)
        if thm == 1:
            return RadiusProblem.thm1(float(data["alpha"]), N, m0)
        if thm == 2:
            return RadiusProblem.thm2(
                float(data["alpha"]),
                N,
                m0,
                _order_field(data.get("m1", "inf"), "m1"),
                _order_field(data.get("m2", "inf"), "m2"),
                parse_h_spec(str(data.get("h", "n"))),
            )
    except KeyError as exc:
        raise ParameterError(f"Suite problem {data!r} is missing {exc}") from None
    except ParameterError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"Invalid suite problem {data!r}: {exc}") from None
    raise ParameterError(f"thm must be 1, 2 or 4, got {data['thm']!r}")


_CONFIG_FIELDS: dict[str, Callable[[Any], Any]] = {
    "samples": int,
    "seed": int,
    "theta_grid": int,
    "radius_grid": int,
    "tolerance": float,
    "truncation": int,
    "threads": int,
    "radius_scale": float,
    "epsilon": float,
    "max_factors": int,
}


def load_suite(path: str | Path) -> tuple[CertificationConfig, list[RadiusProblem]]:
    """Read a YAML suite file.

    The file is a mapping with optional CertificationConfig fields and an
    optional `problems` list; without it the standard problems are used.

    Raises:
        ParameterError: If the file is missing, malformed or has unknown keys.

    """
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParameterError(f"Cannot read suite file {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ParameterError(f"Suite file {path} is not valid YAML: {exc}") from None
    raw = raw or {}
    if not isinstance(raw, dict):
        raise ParameterError(f"Suite file {path} must contain a mapping")

    unknown = set(raw) - set(_CONFIG_FIELDS) - {"problems"}
    if unknown:
        raise ParameterError(f"Unknown suite keys: {', '.join(sorted(unknown))}")
    try:
        settings = {
            key: _CONFIG_FIELDS[key](value)
            for key, value in raw.items()
            if key != "problems"
        }
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"Invalid suite setting: {exc}") from None
    cfg = CertificationConfig(**settings)

    entries = raw.get("problems")
    if entries is None:
        return cfg, standard_problems()
    if not isinstance(entries, list):
        raise ParameterError("Suite 'problems' must be a list")
    return cfg, [problem_from_mapping(entry) for entry in entries]
