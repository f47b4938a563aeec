"""Single-instance inequality checks for subordinates of the extremal functions.

Each check evaluates one instance of an inequality and returns its margin,
LHS − RHS; a margin at or below the configured tolerance means the instance
holds. Subordinates are always built as g = f∘w from an explicit Schwarz
function, so membership needs no separate test.

Key ideas:
- Moduli on |z| = r are maximized over a uniform angular grid that includes
  θ = 0, where the extremal cases attain equality.
- Coefficient sums are truncated at T and the closed-form remainder beyond T
  is added to the LHS, so a pass survives the infinite sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from bohr_lab.config import DEFAULT_TOL, DEFAULT_TRUNCATION, MIN_TRUNCATION
from bohr_lab.errors import ParameterError
from bohr_lab.families import (
    INF,
    ConcaveFamily,
    FamilyKind,
    Order,
    extremal_series,
    f_alpha_derivative_eval,
    f_alpha_eval,
    f_alpha_series,
    f_alpha_tail,
    k_p_eval,
    k_p_scaled_series,
    k_p_tail,
)
from bohr_lab.radius import (
    LEMMA_RADIUS,
    RadiusProblem,
    RadiusResult,
    VanishingOrderSpec,
    Variant,
    find_radius,
    h_sum_enclosure,
)
from bohr_lab.series import (
    SchwarzFunction,
    TruncatedSeries,
    schwarz_to_series,
    series_compose,
    series_derivative,
    series_dilate,
    series_eval_many,
    series_scale,
)


@dataclass(frozen=True)
class CertificationConfig:
    """Sampling and tolerance settings shared by all checks.

    Attributes:
        samples: Random samples per check (per problem for theorem checks).
        seed: Root seed; every sample seed is derived from it.
        theta_grid: Angles used to maximize moduli on |z| = r.
        radius_grid: Radial sample points for the Schwarz-lemma check.
        tolerance: Slack added to every inequality.
        truncation: Series truncation order T.
        threads: Worker cap for the harness, None to use the configured value.
        radius_scale: Theorem checks run at radius_scale × reported radius.
        epsilon: Offset used by sharpness scans.
        max_factors: Most automorphism factors in a sampled Schwarz function.

    """

    samples: int = 64
    seed: int = 42
    theta_grid: int = 64
    radius_grid: int = 16
    tolerance: float = 1e-9
    truncation: int = DEFAULT_TRUNCATION
    threads: int | None = None
    radius_scale: float = 0.9
    epsilon: float = 1e-6
    max_factors: int = 2

    def __post_init__(self) -> None:
        """Validate the settings."""
        if self.samples < 1:
            raise ParameterError(f"samples must be >= 1, got {self.samples}")
        if self.theta_grid < 8:
            raise ParameterError(f"theta_grid must be >= 8, got {self.theta_grid}")
        if self.radius_grid < 1:
            raise ParameterError(f"radius_grid must be >= 1, got {self.radius_grid}")
        if not self.tolerance >= 0:
            raise ParameterError(f"tolerance must be >= 0, got {self.tolerance}")
        if self.truncation < MIN_TRUNCATION:
            raise ParameterError(
                f"truncation must be >= {MIN_TRUNCATION}, got {self.truncation}"
            )
        if self.threads is not None and self.threads < 1:
            raise ParameterError(f"threads must be >= 1, got {self.threads}")
        if not self.radius_scale > 0:
            raise ParameterError(f"radius_scale must be > 0, got {self.radius_scale}")
        if not self.epsilon >= 0:
            raise ParameterError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.max_factors < 0:
            raise ParameterError(f"max_factors must be >= 0, got {self.max_factors}")

    def circle(self, r: float) -> NDArray[np.complex128]:
        """Points r·e^{2πik/K}, k = 0..K−1."""
        theta = 2.0 * math.pi * np.arange(self.theta_grid) / self.theta_grid
        return r * np.exp(1j * theta)


def schwarz_of_order(m: Order) -> SchwarzFunction:
    """Monomial z**m, or the zero map for m = INF."""
    if m == INF:
        return SchwarzFunction.zero()
    return SchwarzFunction.monomial(int(m))


def _check_radius(r: float, upper: float) -> None:
    if not 0.0 <= r < upper:
        raise ParameterError(f"Check radius must lie in [0, {upper}), got {r}")


def subordinate_series(
    family: ConcaveFamily, w: SchwarzFunction, order: int
) -> TruncatedSeries:
    """Coefficients b_0..b_T of g = f∘w for the family's extremal f."""
    return series_compose(extremal_series(family, order), schwarz_to_series(w, order))


def pole_subordinate_scaled(
    p: float, w: SchwarzFunction, order: int
) -> TruncatedSeries:
    """Coefficients b_n pⁿ of ζ ↦ g(pζ) for g = k_p∘w.

    g(pζ) = K(w(pζ)/p) with K(u) = k_p(pu), whose coefficients are bounded by
    p/(1 − p²); b_n itself grows like p^{−n} and overflows for small p.
    """
    inner = series_scale(series_dilate(schwarz_to_series(w, order), p), 1.0 / p)
    return series_compose(k_p_scaled_series(p, order), inner)


def _weighted_tail(series: TruncatedSeries, N: int, r: float) -> float:
    if N > series.order:
        return 0.0
    n = np.arange(N, series.order + 1)
    return float(np.sum(np.abs(series.coeffs[N:]) * r**n))


def _max_modulus(points: NDArray[np.complex128]) -> float:
    return float(np.max(np.abs(points)))


def check_lemma1(
    alpha: float, w: SchwarzFunction, N: int, r: float, cfg: CertificationConfig
) -> float:
    """Σ_{n=N}^{T} |b_n| r^n − Σ_{n=N}^{T} A_n r^n for g = f_α∘w, r <= 1/3."""
    if not 0.0 <= r <= LEMMA_RADIUS:
        raise ParameterError(
            f"Coefficient tail comparison needs 0 <= r <= 1/3, got {r}"
        )
    order = cfg.truncation
    f = f_alpha_series(alpha, order)
    g = series_compose(f, schwarz_to_series(w, order))
    return _weighted_tail(g, N, r) - _weighted_tail(f, N, r)


def check_thm1_inequality(
    alpha: float,
    w0: SchwarzFunction,
    w: SchwarzFunction,
    N: int,
    r: float,
    cfg: CertificationConfig,
) -> float:
    """max_θ |g(w0(z))| + Σ_{n≥N} |b_n| r^n − 1/(2α) for g = f_α∘w, |z| = r.

    The remainders beyond T are bounded by the f_α tails, which is valid for
    r <= 1/3 and exact for w(z) = z.
    """
    _check_radius(r, 1.0)
    order = cfg.truncation
    g = subordinate_series(ConcaveFamily.opening_angle(alpha), w, order)
    inner = w0(cfg.circle(r))
    reach = _max_modulus(inner)
    value = _max_modulus(series_eval_many(g, inner))
    value += f_alpha_tail(alpha, reach, order + 1) if reach > 0 else 0.0
    coefficients = _weighted_tail(g, N, r) + (
        f_alpha_tail(alpha, r, order + 1) if r > 0 else 0.0
    )
    return value + coefficients - 1.0 / (2.0 * alpha)


def check_thm2_inequality(
    alpha: float,
    w0: SchwarzFunction,
    w1: SchwarzFunction,
    w2: SchwarzFunction,
    h: VanishingOrderSpec,
    N: int,
    r: float,
    cfg: CertificationConfig,
) -> float:
    """max_θ (|f(w0)| + |f′(w1)||w2|) + Σ_{n≥N} A_n r^{h(n)} − 1/(2α).

    Here f = f_α and w*_n is the monomial z^{h(n)}; the h-sum uses the
    upper end of its enclosure. Truncation remainders of f and f′ are bounded by their
    positive-coefficient tails at the largest |w0|, |w1| on the circle.
    """
    _check_radius(r, 1.0)
    order = cfg.truncation
    f = f_alpha_series(alpha, order)
    f_prime = series_derivative(f)
    z = cfg.circle(r)
    u0, u1 = w0(z), w1(z)
    scale = np.abs(w2(z))
    terms = np.abs(series_eval_many(f, u0))
    terms += np.abs(series_eval_many(f_prime, u1)) * scale

    reach0, reach1 = _max_modulus(u0), _max_modulus(u1)
    remainder = f_alpha_tail(alpha, reach0, order + 1) if reach0 > 0 else 0.0
    if reach1 > 0:
        head = float(series_eval_many(f_prime, np.array([reach1]))[0].real)
        exact = float(f_alpha_derivative_eval(alpha, reach1))
        remainder += max(exact - head, 0.0) * float(np.max(scale))
    h_sum = h_sum_enclosure(alpha, N, h, r, order)[1]
    return float(np.max(terms)) + remainder + h_sum - 1.0 / (2.0 * alpha)


def check_thm4_inequality(
    p: float,
    w0: SchwarzFunction,
    w: SchwarzFunction,
    N: int,
    r: float,
    cfg: CertificationConfig,
) -> float:
    """max_θ |g(w0(z))| + Σ_{n≥N} |b_n| r^n − p/(1+p)² for g = k_p∘w, r < p.

    Sums run in the variable ζ = z/p, where b_n r^n = (b_n pⁿ)(r/p)^n.
    """
    _check_radius(r, p)
    order = cfg.truncation
    g_scaled = pole_subordinate_scaled(p, w, order)
    inner = w0(cfg.circle(r))
    reach = _max_modulus(inner)
    value = _max_modulus(series_eval_many(g_scaled, inner / p))
    value += k_p_tail(p, reach, order + 1) if reach > 0 else 0.0
    coefficients = _weighted_tail(g_scaled, N, r / p) + (
        k_p_tail(p, r, order + 1) if r > 0 else 0.0
    )
    return value + coefficients - p / (1.0 + p) ** 2


def check_coeff_bound_pole(
    p: float, w: SchwarzFunction, n_max: int, cfg: CertificationConfig
) -> float:
    """max_{1<=n<=n_max} |b_n|/c_n(p) for g = k_p∘w; <= 1 when the bound holds."""
    if not 1 <= n_max <= cfg.truncation:
        raise ParameterError(f"n_max must lie in [1, {cfg.truncation}], got {n_max}")
    bound = k_p_scaled_series(p, n_max)
    g_scaled = pole_subordinate_scaled(p, w, n_max)
    return float(np.max(np.abs(g_scaled.coeffs[1:]) / bound.coeffs[1:].real))


def check_growth_bound(
    family: ConcaveFamily, w: SchwarzFunction, r: float, cfg: CertificationConfig
) -> float:
    """max_θ |g(z) − g(0)| − f(r) for g = f∘w, f the extremal function.

    For the pole family r must stay below p.
    """
    z = cfg.circle(r)
    u = w(z)
    if family.kind is FamilyKind.OPENING_ANGLE:
        _check_radius(r, 1.0)
        values = f_alpha_eval(family.alpha, u)
        bound = float(f_alpha_eval(family.alpha, r))
    else:
        _check_radius(r, family.p)
        values = k_p_eval(family.p, u)
        bound = float(k_p_eval(family.p, r))
    return _max_modulus(values) - bound


def check_distortion(
    alpha: float, w: SchwarzFunction, r: float, cfg: CertificationConfig
) -> float:
    """max_θ |f_α′(w(z))| − (1 + r^m)^{α−1}/(1 − r^m)^{α+1}.

    m is the vanishing order of w.
    """
    _check_radius(r, 1.0)
    if w.is_zero:
        return 0.0
    u = w(cfg.circle(r))
    y = r**w.vanishing_order
    bound = (1.0 + y) ** (alpha - 1.0) / (1.0 - y) ** (alpha + 1.0)
    return _max_modulus(f_alpha_derivative_eval(alpha, u)) - bound


def check_schwarz_derivative(
    family: ConcaveFamily, w: SchwarzFunction, cfg: CertificationConfig
) -> float:
    """|g′(0)| − |f′(0)| for g = f∘w.

    f′(0) = 1 for both extremal functions.
    """
    g = subordinate_series(family, w, 2)
    return abs(complex(g.coeffs[1])) - 1.0


def check_schwarz_bound(w: SchwarzFunction, cfg: CertificationConfig) -> float:
    """max over a radial × angular grid of |w(z)| − |z|^m."""
    radii = np.linspace(0.0, 1.0, cfg.radius_grid + 1, endpoint=False)[1:]
    z = radii[:, None] * cfg.circle(1.0)[None, :]
    return float(np.max(np.abs(w(z)) - np.abs(z) ** w.vanishing_order))


def extremal_margin(
    problem: RadiusProblem, r: float, cfg: CertificationConfig
) -> float:
    """Theorem margin at radius r with every Schwarz function a monomial.

    This equals the problem's radius function at r, computed independently
    through composed series.
    """
    w0 = schwarz_of_order(problem.m0)
    identity = SchwarzFunction.monomial(1)
    if problem.variant is Variant.THM1:
        alpha = problem.family.alpha
        return check_thm1_inequality(alpha, w0, identity, problem.N, r, cfg)
    if problem.variant is Variant.THM4:
        return check_thm4_inequality(problem.family.p, w0, identity, problem.N, r, cfg)
    return check_thm2_inequality(
        problem.family.alpha,
        w0,
        schwarz_of_order(problem.m1),
        schwarz_of_order(problem.m2),
        problem.h,
        problem.N,
        r,
        cfg,
    )


def sharpness_scan(
    problem: RadiusProblem,
    epsilon: float,
    cfg: CertificationConfig | None = None,
    *,
    result: RadiusResult | None = None,
) -> tuple[float, float]:
    """Extremal margins at root − ε and root + ε.

    Args:
        problem: Problem whose radius is scanned.
        epsilon: Offset from the root, >= 0.
        cfg: Check settings (defaults if omitted).
        result: A previously computed radius, to skip the solve.

    Returns:
        (below, above); a sharp radius gives below <= 0 <= above.

    Raises:
        ParameterError: If root ± ε leaves the evaluator's domain.

    """
    cfg = cfg or CertificationConfig()
    if not epsilon >= 0:
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")
    if result is None:
        result = find_radius(problem, DEFAULT_TOL)
    lo, hi = result.root - epsilon, result.root + epsilon
    if lo < 0.0 or hi >= problem.x_max:
        raise ParameterError(
            f"root ± epsilon = [{lo}, {hi}] leaves the domain [0, {problem.x_max})"
        )
    return extremal_margin(problem, lo, cfg), extremal_margin(problem, hi, cfg)
