from __future__ import annotations

import numpy as np
import pytest

from bohr_lab.errors import ParameterError
from bohr_lab.families import INF, ConcaveFamily, k_p_eval
from bohr_lab.radius import (
    RadiusProblem,
    VanishingOrderSpec,
    eval_F,
    eval_G,
    eval_K,
    find_radius,
)
from bohr_lab.series import SchwarzFunction, schwarz_sample, series_eval_many
from bohr_lab.verify import (
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
from bohr_lab.verify.checks import (
    extremal_margin,
    pole_subordinate_scaled,
    schwarz_of_order,
)

IDENTITY = SchwarzFunction.monomial(1)


def test_config_validation() -> None:
    with pytest.raises(ParameterError):
        CertificationConfig(samples=0)
    with pytest.raises(ParameterError):
        CertificationConfig(truncation=4)
    with pytest.raises(ParameterError):
        CertificationConfig(threads=0)
    with pytest.raises(ParameterError):
        CertificationConfig(radius_scale=0.0)


def test_circle_starts_on_the_positive_axis(small_cfg: CertificationConfig) -> None:
    points = small_cfg.circle(0.5)
    assert points.shape == (small_cfg.theta_grid,)
    assert points[0] == 0.5
    assert np.allclose(np.abs(points), 0.5)


def test_schwarz_of_order() -> None:
    assert schwarz_of_order(INF).is_zero
    assert schwarz_of_order(3) == SchwarzFunction.monomial(3)


def test_lemma1_is_tight_for_the_identity(small_cfg: CertificationConfig) -> None:
    assert check_lemma1(1.5, IDENTITY, 2, 0.3, small_cfg) == pytest.approx(
        0.0, abs=1e-14
    )


def test_lemma1_holds_for_samples(small_cfg: CertificationConfig) -> None:
    for seed in range(3):
        w = schwarz_sample(1, 2, seed=seed)
        assert check_lemma1(2.0, w, 1, 1 / 3, small_cfg) <= small_cfg.tolerance


def test_lemma1_rejects_large_radius(small_cfg: CertificationConfig) -> None:
    with pytest.raises(ParameterError):
        check_lemma1(1.5, IDENTITY, 1, 0.4, small_cfg)


def test_thm1_extremal_margin_equals_radius_function() -> None:
    cfg = CertificationConfig(truncation=128)
    for m0 in (INF, 2):
        w0 = schwarz_of_order(m0)
        margin = check_thm1_inequality(1.5, w0, IDENTITY, 2, 0.25, cfg)
        assert margin == pytest.approx(eval_F(1.5, 2, m0, 0.25), abs=1e-12)


def test_thm1_at_zero_radius() -> None:
    cfg = CertificationConfig(truncation=16)
    margin = check_thm1_inequality(2.0, IDENTITY, IDENTITY, 1, 0.0, cfg)
    assert margin == pytest.approx(-0.25)


def test_thm2_extremal_margin_equals_radius_function() -> None:
    cfg = CertificationConfig(truncation=128)
    identity_h = VanishingOrderSpec.identity()
    margin = check_thm2_inequality(
        1.5, IDENTITY, IDENTITY, IDENTITY, identity_h, 1, 0.2, cfg
    )
    lo, _ = eval_K(1.5, 1, 1, 1, 1, identity_h, 0.2)
    assert margin == pytest.approx(lo, abs=1e-12)


def test_thm4_extremal_margin_and_pole_domain() -> None:
    cfg = CertificationConfig(truncation=128)
    margin = check_thm4_inequality(0.5, SchwarzFunction.zero(), IDENTITY, 1, 0.14, cfg)
    assert margin == pytest.approx(eval_G(0.5, 1, INF, 0.14), abs=1e-12)
    assert margin < 0
    assert check_thm4_inequality(
        0.5, IDENTITY, IDENTITY, 1, 0.0, cfg
    ) == pytest.approx(-2 / 9)
    with pytest.raises(ParameterError):
        check_thm4_inequality(0.5, IDENTITY, IDENTITY, 1, 0.5, cfg)


def test_theorem_inequalities_hold_below_the_radius(
    small_cfg: CertificationConfig,
) -> None:
    r1 = 0.9 * find_radius(RadiusProblem.thm1(1.5, 1, 1)).reported_radius
    r4 = 0.9 * find_radius(RadiusProblem.thm4(0.5, 1, 2)).root
    for seed in range(3):
        w0 = schwarz_sample(1, 1, seed=seed)
        w = schwarz_sample(1, 2, seed=seed + 10)
        assert check_thm1_inequality(1.5, w0, w, 1, r1, small_cfg) <= 1e-9
        w0 = schwarz_sample(2, 1, seed=seed)
        assert check_thm4_inequality(0.5, w0, w, 1, r4, small_cfg) <= 1e-9


def test_pole_coefficient_bound() -> None:
    cfg = CertificationConfig(truncation=64)
    assert check_coeff_bound_pole(0.5, IDENTITY, 30, cfg) == pytest.approx(1.0)
    assert check_coeff_bound_pole(0.5, SchwarzFunction.monomial(2), 30, cfg) < 1.0
    with pytest.raises(ParameterError):
        check_coeff_bound_pole(0.5, IDENTITY, 65, cfg)


def test_small_pole_checks_at_full_truncation() -> None:
    # c_n(0.05) overflows binary64 well before n = 256.
    cfg = CertificationConfig()
    p = 0.05
    zero = SchwarzFunction.zero()
    margin = check_thm4_inequality(p, zero, IDENTITY, 1, 0.01, cfg)
    assert margin == pytest.approx(eval_G(p, 1, INF, 0.01), abs=1e-12)

    r = 0.9 * find_radius(RadiusProblem.thm4(p, 1, 1)).root
    w = schwarz_sample(1, 2, seed=3)
    assert check_thm4_inequality(p, IDENTITY, w, 1, r, cfg) <= 1e-9

    assert check_coeff_bound_pole(p, IDENTITY, 200, cfg) == pytest.approx(1.0)
    assert check_coeff_bound_pole(p, w, 200, cfg) <= 1.0 + 1e-9

    below, above = sharpness_scan(RadiusProblem.thm4(p, 1, INF), 1e-6, cfg)
    assert below < 0 < above


def test_pole_scaled_subordinate_matches_closed_form() -> None:
    p = 0.3
    w = schwarz_sample(2, 1, seed=8)
    g_scaled = pole_subordinate_scaled(p, w, 128)
    zeta = np.array([0.2, -0.4j, 0.5 + 0.3j])
    expected = k_p_eval(p, w(p * zeta))
    assert np.allclose(series_eval_many(g_scaled, zeta), expected, atol=1e-12)


def test_growth_bound(small_cfg: CertificationConfig) -> None:
    angle = ConcaveFamily.opening_angle(1.5)
    pole = ConcaveFamily.pole(0.5)
    assert check_growth_bound(angle, IDENTITY, 0.5, small_cfg) == pytest.approx(0.0)
    assert check_growth_bound(pole, IDENTITY, 0.3, small_cfg) == pytest.approx(0.0)
    w = schwarz_sample(2, 2, seed=5)
    assert check_growth_bound(angle, w, 0.8, small_cfg) <= 1e-12
    with pytest.raises(ParameterError):
        check_growth_bound(pole, IDENTITY, 0.6, small_cfg)


def test_distortion(small_cfg: CertificationConfig) -> None:
    assert check_distortion(2.0, IDENTITY, 0.3, small_cfg) == pytest.approx(0.0)
    assert check_distortion(2.0, SchwarzFunction.zero(), 0.3, small_cfg) == 0.0
    w = schwarz_sample(2, 2, seed=9)
    assert check_distortion(1.25, w, 0.5, small_cfg) <= 1e-12


def test_schwarz_checks(small_cfg: CertificationConfig) -> None:
    pole = ConcaveFamily.pole(0.5)
    assert check_schwarz_derivative(pole, IDENTITY, small_cfg) == pytest.approx(0.0)
    w = schwarz_sample(1, 2, seed=4)
    assert check_schwarz_derivative(pole, w, small_cfg) <= 1e-12
    assert check_schwarz_bound(w, small_cfg) <= 1e-12
    exact = check_schwarz_bound(SchwarzFunction.monomial(2), small_cfg)
    assert exact == pytest.approx(0.0, abs=1e-15)


def test_extremal_margin_is_near_zero_at_the_root() -> None:
    cfg = CertificationConfig(truncation=128)
    problem = RadiusProblem.thm2(1.5, 2, INF, 1, INF)
    result = find_radius(problem)
    assert abs(extremal_margin(problem, result.root, cfg)) < 1e-8


@pytest.mark.parametrize(
    "problem",
    [
        RadiusProblem.thm1(1.0, 1, INF),
        RadiusProblem.thm2(2.0, 1, 2, 1, 3),
        RadiusProblem.thm4(0.5, 1, INF),
    ],
)
def test_sharpness_scan_crosses_zero(problem: RadiusProblem) -> None:
    below, above = sharpness_scan(problem, 1e-6, CertificationConfig(truncation=128))
    assert below < 0 < above


def test_sharpness_scan_checks_domain() -> None:
    problem = RadiusProblem.thm4(0.5, 1, INF)
    with pytest.raises(ParameterError):
        sharpness_scan(problem, 0.5)
    with pytest.raises(ParameterError):
        sharpness_scan(problem, -1.0)
