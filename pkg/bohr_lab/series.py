"""Truncated power-series arithmetic and Schwarz-function construction.

A `TruncatedSeries` holds Taylor coefficients a_0..a_T of a function analytic
near 0. All operations are pure and return new, read-only values, so series
can be shared freely between worker threads.

Subordination g = f∘w is computed with `series_compose`; the inner series
must vanish at 0. Schwarz functions are represented in factored form
(`SchwarzFunction`) and expanded on demand with `schwarz_to_series`.

Key ideas:
- Coefficients are complex binary64; results carry the smaller operand order.
- Composition is right-to-left Horner over the outer coefficients.
- Real powers use the logarithmic-derivative recurrence, no exp/log series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from bohr_lab.errors import CompositionError, ParameterError

MAX_FACTOR_RADIUS = 0.9
MIN_DAMPING = 0.1


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Taylor coefficients of a function, truncated at order T.

    Attributes:
        coeffs: Read-only complex array of length T + 1; coeffs[n] is the
            coefficient of z**n.
        order: Truncation order T.

    """

    coeffs: NDArray[np.complex128]
    order: int

    def __post_init__(self) -> None:
        """Validate shape and finiteness, then freeze the coefficient array."""
        if self.order < 0:
            raise ParameterError(f"Truncation order must be >= 0, got {self.order}")
        if self.coeffs.shape != (self.order + 1,):
            raise ParameterError(
                f"Expected {self.order + 1} coefficients, got {self.coeffs.shape}"
            )
        if not np.all(np.isfinite(self.coeffs)):
            raise CompositionError("Series coefficients must be finite")
        self.coeffs.setflags(write=False)

    @classmethod
    def from_coeffs(
        cls, values: ArrayLike, order: int | None = None
    ) -> TruncatedSeries:
        """Build a series from leading coefficients.

        Args:
            values: Coefficients a_0, a_1, ... (shorter input is zero-padded).
            order: Truncation order; defaults to len(values) - 1.

        Returns:
            A new series of the requested order.

        """
        data = np.asarray(values, dtype=np.complex128).ravel()
        if order is None:
            order = max(len(data) - 1, 0)
        out = np.zeros(order + 1, dtype=np.complex128)
        n = min(len(data), order + 1)
        out[:n] = data[:n]
        return cls(out, order)

    @classmethod
    def constant(cls, value: complex, order: int) -> TruncatedSeries:
        """Return the constant series `value`."""
        return cls.from_coeffs([value], order)

    @classmethod
    def identity(cls, order: int) -> TruncatedSeries:
        """Return the series of the identity map z."""
        return cls.from_coeffs([0.0, 1.0], order)

    @classmethod
    def monomial(cls, power: int, order: int, scale: complex = 1.0) -> TruncatedSeries:
        """Return scale * z**power truncated at `order`."""
        out = np.zeros(order + 1, dtype=np.complex128)
        if power <= order:
            out[power] = scale
        return cls(out, order)

    @property
    def valuation(self) -> int:
        """Index of the first nonzero coefficient (order + 1 for the zero series)."""
        nonzero = np.flatnonzero(self.coeffs)
        return int(nonzero[0]) if nonzero.size else self.order + 1

    def truncate(self, order: int) -> TruncatedSeries:
        """Return the same series truncated (or zero-extended) to `order`."""
        return TruncatedSeries.from_coeffs(self.coeffs, order)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, other)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_mul(self, other)

    def __call__(self, z: complex) -> complex:
        return series_eval(self, z)


def _common_order(a: TruncatedSeries, b: TruncatedSeries) -> int:
    return min(a.order, b.order)


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise sum truncated at the smaller order."""
    order = _common_order(a, b)
    return TruncatedSeries(a.coeffs[: order + 1] + b.coeffs[: order + 1], order)


def series_scale(s: TruncatedSeries, factor: complex) -> TruncatedSeries:
    """Multiply every coefficient by `factor`."""
    return TruncatedSeries(s.coeffs * factor, s.order)


def series_dilate(s: TruncatedSeries, factor: float) -> TruncatedSeries:
    """Series of z ↦ s(factor·z): coefficient n times factor**n."""
    powers = factor ** np.arange(s.order + 1, dtype=np.float64)
    return TruncatedSeries(s.coeffs * powers, s.order)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller order."""
    order = _common_order(a, b)
    product = np.convolve(a.coeffs[: order + 1], b.coeffs[: order + 1])
    return TruncatedSeries(product[: order + 1], order)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Taylor coefficients of outer∘inner through the smaller order.

    Horner in the series algebra: start from the last outer coefficient and
    repeatedly multiply by `inner` and add the next coefficient. Composing with
    the identity series reproduces `outer` exactly.

    Args:
        outer: Series of the outer function f.
        inner: Series of the inner function w; w(0) must be 0.

    Returns:
        The series of f(w(z)).

    Raises:
        ParameterError: If inner has a nonzero constant term.
        CompositionError: If the result overflows.

    """
    if inner.coeffs[0] != 0:
        raise ParameterError(
            f"Inner series must vanish at 0, got constant term {inner.coeffs[0]}"
        )
    order = _common_order(outer, inner)
    a = outer.coeffs[: order + 1]
    w = inner.coeffs[: order + 1]
    acc = np.zeros(order + 1, dtype=np.complex128)
    acc[0] = a[order]
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(order - 1, -1, -1):
            acc = np.convolve(acc, w)[: order + 1]
            acc[0] += a[k]
    if not np.all(np.isfinite(acc)):
        raise CompositionError("Composition overflowed; lower the truncation order")
    return TruncatedSeries(acc, order)


def series_real_pow(s: TruncatedSeries, alpha: float) -> TruncatedSeries:
    """Coefficients of s**alpha for a series with constant term 1.

    Solves (s^α)'·s = α·s'·s^α coefficientwise:
    u_n = (1/n) Σ_{k=1}^{n} (α k − (n − k)) s_k u_{n−k}.

    Raises:
        ParameterError: If s(0) != 1.

    """
    if s.coeffs[0] != 1:
        raise ParameterError(
            f"Real power needs constant term 1, got {s.coeffs[0]}"
        )
    order = s.order
    u = np.zeros(order + 1, dtype=np.complex128)
    u[0] = 1.0
    for n in range(1, order + 1):
        k = np.arange(1, n + 1)
        weights = alpha * k - (n - k)
        u[n] = np.dot(weights * s.coeffs[1 : n + 1], u[n - 1 :: -1][:n]) / n
    return TruncatedSeries(u, order)


def series_derivative(s: TruncatedSeries) -> TruncatedSeries:
    """Termwise derivative; the result has order T - 1."""
    if s.order == 0:
        return TruncatedSeries.constant(0.0, 0)
    n = np.arange(1, s.order + 1)
    return TruncatedSeries(s.coeffs[1:] * n, s.order - 1)


def series_eval(s: TruncatedSeries, z: complex) -> complex:
    """Horner evaluation of the degree-T partial sum at z (|z| < 1)."""
    if abs(z) >= 1:
        raise ParameterError(f"Series evaluation needs |z| < 1, got |z| = {abs(z)}")
    acc = 0j
    for c in s.coeffs[::-1]:
        acc = acc * z + c
    return complex(acc)


def series_eval_many(s: TruncatedSeries, points: NDArray) -> NDArray[np.complex128]:
    """Vectorized Horner evaluation on an array of points inside the disk."""
    points = np.asarray(points, dtype=np.complex128)
    if points.size and np.max(np.abs(points)) >= 1:
        raise ParameterError("Series evaluation needs all points inside the unit disk")
    acc = np.zeros_like(points)
    for c in s.coeffs[::-1]:
        acc = acc * points + c
    return acc


@dataclass(frozen=True)
class SchwarzFunction:
    """A member of B_m in factored form.

    Represents w(z) = ρ·e^{iφ}·z^m·∏_k (μ_k − z)/(1 − conj(μ_k) z).
    Each factor is a disk automorphism, so |w(z)| ≤ ρ|z|^m ≤ |z|^m on the
    disk. A damping of 0 gives the zero map, used for the m = ∞ limit.

    Attributes:
        vanishing_order: m >= 1.
        factors: Automorphism parameters μ_k with |μ_k| < 1.
        damping: ρ in [0, 1].
        phase: Unimodular normalizer angle φ.
        seed: Seed used by `schwarz_sample`, or None for explicit construction.

    """

    vanishing_order: int
    factors: tuple[complex, ...] = ()
    damping: float = 1.0
    phase: float = 0.0
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        """Check membership conditions."""
        if self.vanishing_order < 1:
            raise ParameterError(
                f"Vanishing order must be >= 1, got {self.vanishing_order}"
            )
        if not 0.0 <= self.damping <= 1.0:
            raise ParameterError(f"Damping must lie in [0, 1], got {self.damping}")
        for mu in self.factors:
            if abs(mu) >= 1:
                raise ParameterError(f"Factor point must lie in the disk, got {mu}")
            if mu == 0:
                # A zero at the origin would raise the vanishing order.
                raise ParameterError("Factor point 0 changes the vanishing order")

    @classmethod
    def monomial(cls, m: int) -> SchwarzFunction:
        """Return w(z) = z**m, the extremal choice in every sharpness argument."""
        return cls(vanishing_order=m)

    @classmethod
    def zero(cls) -> SchwarzFunction:
        """Return the zero map (pointwise limit of z**m as m grows)."""
        return cls(vanishing_order=1, damping=0.0)

    @property
    def is_zero(self) -> bool:
        """True for the zero map."""
        return self.damping == 0.0

    @property
    def leading_coefficient(self) -> complex:
        """w^{(m)}(0)/m!, nonzero whenever ρ > 0."""
        value = self.damping * np.exp(1j * self.phase)
        for mu in self.factors:
            value *= mu
        return complex(value)

    def __call__(self, z: complex | NDArray) -> complex | NDArray:
        """Evaluate the factored form at z (scalar or array)."""
        z = np.asarray(z, dtype=np.complex128)
        value = self.damping * np.exp(1j * self.phase) * z**self.vanishing_order
        for mu in self.factors:
            value = value * (mu - z) / (1 - np.conj(mu) * z)
        return complex(value) if value.ndim == 0 else value


def schwarz_sample(m: int, num_factors: int, seed: int) -> SchwarzFunction:
    """Draw a deterministic pseudo-random member of B_m.

    Damping is uniform on [0.1, 1.0); factor points are uniform on the disk of
    radius 0.9 (excluding the origin); the phase is uniform on [0, 2π).

    Args:
        m: Vanishing order, m >= 1.
        num_factors: Number of automorphism factors (0 gives ρ e^{iφ} z^m).
        seed: Seed for numpy's default generator.

    Returns:
        The sampled Schwarz function; equal seeds give equal samples.

    """
    if m < 1:
        raise ParameterError(f"Vanishing order must be >= 1, got {m}")
    if num_factors < 0:
        raise ParameterError(f"num_factors must be >= 0, got {num_factors}")
    rng = np.random.default_rng(seed)
    damping = float(rng.uniform(MIN_DAMPING, 1.0))
    phase = float(rng.uniform(0.0, 2 * math.pi))
    radii = MAX_FACTOR_RADIUS * np.sqrt(rng.uniform(1e-6, 1.0, size=num_factors))
    angles = rng.uniform(0.0, 2 * math.pi, size=num_factors)
    factors = tuple(complex(r * np.exp(1j * t)) for r, t in zip(radii, angles))
    return SchwarzFunction(
        vanishing_order=m,
        factors=factors,
        damping=damping,
        phase=phase,
        seed=seed,
    )


def _automorphism_series(mu: complex, order: int) -> TruncatedSeries:
    """Series of (μ − z)/(1 − conj(μ) z).

    Coefficients: μ, then conj(μ)^{k−1}(|μ|² − 1).
    """
    out = np.zeros(order + 1, dtype=np.complex128)
    out[0] = mu
    if order >= 1:
        powers = np.conj(mu) ** np.arange(order)
        out[1:] = powers * (abs(mu) ** 2 - 1)
    return TruncatedSeries(out, order)


def schwarz_to_series(w: SchwarzFunction, order: int) -> TruncatedSeries:
    """Taylor expansion of a Schwarz function through `order`.

    The coefficients below z**m are exactly zero.
    """
    if w.is_zero:
        return TruncatedSeries.constant(0.0, order)
    scale = w.damping * np.exp(1j * w.phase)
    result = TruncatedSeries.monomial(w.vanishing_order, order, complex(scale))
    for mu in w.factors:
        result = series_mul(result, _automorphism_series(mu, order))
    coeffs = np.array(result.coeffs)
    coeffs[: min(w.vanishing_order, order + 1)] = 0.0
    return TruncatedSeries(coeffs, order)

