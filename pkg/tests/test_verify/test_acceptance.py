from __future__ import annotations

import pytest

from bohr_lab import families
from bohr_lab.errors import ParameterError, SolverError
from bohr_lab.verify import CertificationConfig, run_acceptance
from bohr_lab.verify import acceptance
from bohr_lab.verify.acceptance import (
    CRITERIA,
    CRITERION_TITLES,
    binomial_coefficient_oracle,
    criterion_classical,
    criterion_closed_form_alpha,
    criterion_closed_form_pole,
    criterion_coefficients,
    criterion_sharpness,
    pole_quadratic_root,
    sweep_problems,
)


def test_every_criterion_has_a_title() -> None:
    assert sorted(CRITERIA) == list(range(1, 10))
    assert sorted(CRITERION_TITLES) == sorted(CRITERIA)


def test_binomial_oracle_matches_recurrence() -> None:
    for alpha in (1.0, 1.5, 2.0):
        for n in (1, 7, 30):
            assert binomial_coefficient_oracle(alpha, n) == pytest.approx(
                families.coeff_A(alpha, n), rel=1e-12
            )


def test_pole_quadratic_root() -> None:
    assert pole_quadratic_root(0.5) == pytest.approx(0.1458980337503155, abs=1e-12)


@pytest.mark.parametrize(
    "criterion",
    [
        criterion_closed_form_alpha,
        criterion_closed_form_pole,
        criterion_classical,
        criterion_coefficients,
        criterion_sharpness,
    ],
)
def test_cheap_criteria_pass(criterion) -> None:
    result = criterion(CertificationConfig())
    assert result.passed, result.detail


def test_tampered_recurrence_fails_coefficient_criterion(
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    original = families.coeff_A

    def tampered(alpha: float, n: int) -> float:
        return original(alpha, n) * (1.0 + 1e-6)

    monkeypatch.setattr(families, "coeff_A", tampered)
    result = criterion_coefficients(CertificationConfig())
    assert not result.passed
    assert result.number == 4


def test_run_acceptance_selects_and_orders() -> None:
    results = run_acceptance(only=[3, 1])
    assert [r.number for r in results] == [1, 3]
    assert all(r.passed for r in results)
    assert results[0].title == CRITERION_TITLES[1]


def test_run_acceptance_rejects_unknown_criteria() -> None:
    with pytest.raises(ParameterError):
        run_acceptance(only=[10])


def test_solver_errors_fail_a_criterion(monkeypatch: pytest.MonkeyPatch) -> None:
    def broken(cfg: CertificationConfig) -> acceptance.CriterionResult:
        raise SolverError("no bracket")

    monkeypatch.setitem(acceptance.CRITERIA, 3, broken)
    (result,) = run_acceptance(only=[3])
    assert not result.passed
    assert result.detail == "no bracket"


def test_sweep_covers_every_combination() -> None:
    problems = sweep_problems()
    assert len(problems) == 3 * 3 * (3 + 3 + 3 * 9)
    assert len(set(map(repr, problems))) == len(problems)
