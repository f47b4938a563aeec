"""Sampled certification of the radius inequalities.

- `checks`: one inequality instance at a time, each returning a margin.
- `harness`: seeded parallel suites and YAML suite files.
- `acceptance`: the criterion battery run by `bohr-lab selftest`.
"""

from bohr_lab.verify.acceptance import CriterionResult, run_acceptance
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
    sharpness_scan,
)
from bohr_lab.verify.harness import (
    VerificationReport,
    Violation,
    load_suite,
    run_suite,
    standard_problems,
)

__all__ = [
    "CertificationConfig",
    "CriterionResult",
    "VerificationReport",
    "Violation",
    "check_coeff_bound_pole",
    "check_distortion",
    "check_growth_bound",
    "check_lemma1",
    "check_schwarz_bound",
    "check_schwarz_derivative",
    "check_thm1_inequality",
    "check_thm2_inequality",
    "check_thm4_inequality",
    "load_suite",
    "run_acceptance",
    "run_suite",
    "sharpness_scan",
    "standard_problems",
]
