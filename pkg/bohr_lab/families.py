"""The two extremal families and their scalar machinery.

Opening-angle family (α in [1, 2]), extremal function
    f_α(z) = (1/(2α))·(((1+z)/(1−z))^α − 1) = Σ A_n z^n,
and pole family (p in (0, 1)), extremal function
    k_p(z) = p z/((p − z)(1 − p z)) = Σ c_n(p) z^n.

Coefficients A_n come from the three-term recurrence
    (n+1) c_{n+1} = 2α c_n + (n−1) c_{n−1},  A_n = c_n/(2α),
which follows from (1 − z²) g′ = 2α g for g = ((1+z)/(1−z))^α. All terms of
the recurrence are nonnegative, so it is forward stable.

Order parameters m (vanishing orders of Schwarz functions) are positive
integers or `INF`; x**INF is taken as 0 on [0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Union

import numpy as np
from numpy.typing import NDArray

from bohr_lab.errors import ParameterError
from bohr_lab.series import TruncatedSeries

INF = math.inf
Order = Union[int, float]

ROGOSINSKI_RADIUS = 0.5


def validate_order(m: Order, name: str = "m") -> Order:
    """Return m if it is a positive integer or INF, else raise ParameterError."""
    if m == INF:
        return INF
    if isinstance(m, bool) or not float(m).is_integer() or m < 1:
        raise ParameterError(f"{name} must be a positive integer or inf, got {m!r}")
    return int(m)


def order_power(x: float, m: Order) -> float:
    """x**m with the m = INF limit taken as 0 (valid for 0 <= x < 1)."""
    if m == INF:
        return 0.0
    return x ** int(m)


def format_order(m: Order) -> str:
    """Render an order parameter for output ("inf" for INF)."""
    return "inf" if m == INF else str(int(m))


class FamilyKind(str, Enum):
    """Which extremal family a parameter set belongs to."""

    OPENING_ANGLE = "opening_angle"
    POLE = "pole"


@dataclass(frozen=True)
class ConcaveFamily:
    """A concave univalent family: opening angle πα or pole p.

    Use `ConcaveFamily.opening_angle(alpha)` or `ConcaveFamily.pole(p)`.
    """

    kind: FamilyKind
    parameter: float

    def __post_init__(self) -> None:
        """Validate the family parameter."""
        if self.kind is FamilyKind.OPENING_ANGLE:
            _check_alpha(self.parameter)
        else:
            _check_p(self.parameter)

    @classmethod
    def opening_angle(cls, alpha: float) -> ConcaveFamily:
        """Family with opening angle πα, α in [1, 2]."""
        return cls(FamilyKind.OPENING_ANGLE, float(alpha))

    @classmethod
    def pole(cls, p: float) -> ConcaveFamily:
        """Family with a simple pole at p in (0, 1)."""
        return cls(FamilyKind.POLE, float(p))

    @property
    def alpha(self) -> float:
        """Opening-angle parameter; ParameterError for pole families."""
        if self.kind is not FamilyKind.OPENING_ANGLE:
            raise ParameterError("Pole family has no alpha")
        return self.parameter

    @property
    def p(self) -> float:
        """Pole location; ParameterError for opening-angle families."""
        if self.kind is not FamilyKind.POLE:
            raise ParameterError("Opening-angle family has no pole p")
        return self.parameter


@dataclass(frozen=True)
class ExtremalData:
    """Extremal function data of a family, normalized to |f′(0)| = 1."""

    family: ConcaveFamily
    dist_to_boundary: float
    normalization: float = 1.0


def _check_alpha(alpha: float) -> None:
    if not 1.0 <= alpha <= 2.0:
        raise ParameterError(f"alpha must lie in [1, 2], got {alpha}")


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p must lie in (0, 1), got {p}")


def _check_index(n: int) -> None:
    if n < 1:
        raise ParameterError(f"Coefficient index must be >= 1, got {n}")


def _table_size(n_max: int) -> int:
    size = 64
    while size < n_max:
        size *= 2
    return size


@lru_cache(maxsize=64)
def _coeff_A_cached(alpha: float, size: int) -> NDArray[np.float64]:
    c = np.empty(size + 1, dtype=np.float64)
    c[0] = 1.0
    c[1] = 2.0 * alpha
    for n in range(1, size):
        c[n + 1] = (2.0 * alpha * c[n] + (n - 1) * c[n - 1]) / (n + 1)
    table = c / (2.0 * alpha)
    table[0] = 0.0
    table.setflags(write=False)
    return table


def coeff_A_table(alpha: float, n_max: int) -> NDArray[np.float64]:
    """Return A_0..A_{n_max} for f_α (A_0 = 0); read-only, cached."""
    _check_alpha(alpha)
    return _coeff_A_cached(float(alpha), _table_size(n_max))[: n_max + 1]


def coeff_A(alpha: float, n: int) -> float:
    """Taylor coefficient A_n of f_α, n >= 1."""
    _check_index(n)
    return float(coeff_A_table(alpha, n)[n])


def coeff_c_table(p: float, n_max: int) -> NDArray[np.float64]:
    """Return c_0(p)..c_{n_max}(p) for k_p (c_0 = 0)."""
    _check_p(p)
    n = np.arange(1, n_max + 1, dtype=np.float64)
    table = np.zeros(n_max + 1, dtype=np.float64)
    with np.errstate(over="ignore"):
        table[1:] = (1.0 - p ** (2 * n)) / (1.0 - p * p) * (1.0 / p) ** (n - 1)
    return table


def coeff_c_scaled_table(p: float, n_max: int) -> NDArray[np.float64]:
    """Return c_n(p)·p^n = p(1 − p^{2n})/(1 − p²) for n = 0..n_max.

    These are the coefficients of ζ ↦ k_p(pζ); all lie in [0, p/(1 − p²)], so
    they stay finite where c_n(p) itself overflows.
    """
    _check_p(p)
    n = np.arange(n_max + 1, dtype=np.float64)
    table = p * (1.0 - p ** (2 * n)) / (1.0 - p * p)
    table[0] = 0.0
    return table


def coeff_c(p: float, n: int) -> float:
    """Taylor coefficient c_n(p) = (1 − p^{2n})/((1 − p²) p^{n−1}) of k_p."""
    _check_index(n)
    return float(coeff_c_table(p, n)[n])


def f_alpha_eval(alpha: float, z: complex) -> complex:
    """Closed form f_α(z) = (1/(2α))·(((1+z)/(1−z))^α − 1) for |z| < 1.

    Real input gives a real result; complex input uses the principal branch,
    which is the analytic one since (1+z)/(1−z) has positive real part.
    Arrays are evaluated elementwise.
    """
    _check_alpha(alpha)
    if np.max(np.abs(z)) >= 1:
        raise ParameterError(f"f_alpha needs |z| < 1, got |z| = {np.max(np.abs(z))}")
    ratio = (1 + z) / (1 - z)
    return (ratio**alpha - 1) / (2 * alpha)


def f_alpha_derivative_eval(alpha: float, z: complex) -> complex:
    """Closed form f_α′(z) = (1+z)^{α−1}/(1−z)^{α+1} for |z| < 1."""
    _check_alpha(alpha)
    if np.max(np.abs(z)) >= 1:
        raise ParameterError(f"f_alpha' needs |z| < 1, got |z| = {np.max(np.abs(z))}")
    return (1 + z) ** (alpha - 1) / (1 - z) ** (alpha + 1)


def _head(table: NDArray[np.float64], x: float, N: int) -> float:
    """Σ_{n=1}^{N−1} table[n] x^n by Horner."""
    acc = 0.0
    for n in range(N - 1, 0, -1):
        acc = (acc + table[n]) * x
    return acc


def f_alpha_tail(alpha: float, x: float, N: int) -> float:
    """Exact tail Σ_{n≥N} A_n x^n = f_α(x) − Σ_{n<N} A_n x^n, 0 <= x < 1."""
    _check_index(N)
    if not 0.0 <= x < 1.0:
        raise ParameterError(f"Tail needs 0 <= x < 1, got {x}")
    if x == 0.0:
        return 0.0
    head = _head(coeff_A_table(alpha, N), x, N)
    return max(float(f_alpha_eval(alpha, x)) - head, 0.0)


def k_p_eval(p: float, z: complex) -> complex:
    """Closed form k_p(z) = p z/((p − z)(1 − p z)) for |z| < p."""
    _check_p(p)
    if np.max(np.abs(z)) >= p:
        raise ParameterError(f"k_p needs |z| < p = {p}, got |z| = {np.max(np.abs(z))}")
    return p * z / ((p - z) * (1 - p * z))


def k_p_tail(p: float, x: float, N: int) -> float:
    """Exact tail Σ_{n≥N} c_n(p) x^n = k_p(x) − head, 0 <= x < p."""
    _check_index(N)
    if not 0.0 <= x < p:
        raise ParameterError(f"Tail needs 0 <= x < p = {p}, got {x}")
    if x == 0.0:
        return 0.0
    head = _head(coeff_c_scaled_table(p, N), x / p, N)
    return max(float(k_p_eval(p, x)) - head, 0.0)


def distortion_term(alpha: float, x: float, m1: Order, m2: Order) -> float:
    """x^{m2}·(1 + x^{m1})^{α−1}/(1 − x^{m1})^{α+1}; 0 when m2 is INF."""
    _check_alpha(alpha)
    if not 0.0 <= x < 1.0:
        raise ParameterError(f"Distortion term needs 0 <= x < 1, got {x}")
    m1 = validate_order(m1, "m1")
    m2 = validate_order(m2, "m2")
    if m2 == INF:
        return 0.0
    y = order_power(x, m1)
    return order_power(x, m2) * (1 + y) ** (alpha - 1) / (1 - y) ** (alpha + 1)


def extremal_distance(family: ConcaveFamily) -> float:
    """d(f(0), ∂f(D)) for the extremal function: 1/(2α) or p/(1+p)²."""
    if family.kind is FamilyKind.OPENING_ANGLE:
        return 1.0 / (2.0 * family.alpha)
    p = family.p
    return p / (1.0 + p) ** 2


def extremal_data(family: ConcaveFamily) -> ExtremalData:
    """Bundle the extremal distance with the family."""
    return ExtremalData(family=family, dist_to_boundary=extremal_distance(family))


def f_alpha_series(alpha: float, order: int) -> TruncatedSeries:
    """Series (0, A_1, ..., A_T) of f_α."""
    return TruncatedSeries.from_coeffs(coeff_A_table(alpha, order), order)


def k_p_series(p: float, order: int) -> TruncatedSeries:
    """Series (0, c_1(p), ..., c_T(p)) of k_p, convergent on |z| < p."""
    return TruncatedSeries.from_coeffs(coeff_c_table(p, order), order)


def k_p_scaled_series(p: float, order: int) -> TruncatedSeries:
    """Series of ζ ↦ k_p(pζ), convergent on |ζ| < 1 with bounded coefficients."""
    return TruncatedSeries.from_coeffs(coeff_c_scaled_table(p, order), order)


def extremal_series(family: ConcaveFamily, order: int) -> TruncatedSeries:
    """Series of the family's extremal function."""
    if family.kind is FamilyKind.OPENING_ANGLE:
        return f_alpha_series(family.alpha, order)
    return k_p_series(family.p, order)


def extremal_eval(family: ConcaveFamily, x: float) -> float:
    """Closed-form value of the extremal function at a real point."""
    if family.kind is FamilyKind.OPENING_ANGLE:
        return float(f_alpha_eval(family.alpha, x))
    return float(k_p_eval(family.p, x))
