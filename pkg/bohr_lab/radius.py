"""Radius functions F, K, G and a certified bracketing root finder.

Each radius is the unique root in (0, x_max) of a strictly increasing
evaluator that is negative at 0:

    F(x) = Σ_{n≥N} A_n x^n + f_α(x^{m0}) − 1/(2α)
    K(x) = Σ_{n≥N} A_n x^{h(n)} + f_α(x^{m0})
           + x^{m2}(1 + x^{m1})^{α−1}/(1 − x^{m1})^{α+1} − 1/(2α)
    G(x) = Σ_{n≥N} c_n(p) x^n + k_p(x^{m0}) − p/(1+p)²

F and G (and K for closed-form h) are evaluated exactly through tails of the
extremal closed forms. K with a tabulated h is evaluated as an enclosure
(lo, hi) whose upper end uses the declared affine lower bound on h beyond the
table. `find_radius` bisects on the certified sign and then polishes with
Brent's method inside the final bracket; the bracket is authoritative.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from scipy.optimize import brentq

from bohr_lab.config import DEFAULT_TOL, DEFAULT_TRUNCATION
from bohr_lab.errors import EnclosureTooWide, NoSignChange, ParameterError
from bohr_lab.families import (
    INF,
    ConcaveFamily,
    FamilyKind,
    Order,
    coeff_A_table,
    distortion_term,
    f_alpha_eval,
    f_alpha_tail,
    format_order,
    k_p_eval,
    k_p_tail,
    order_power,
    validate_order,
)

logger = logging.getLogger("bohr_lab.radius")

OPENING_ANGLE_OFFSET = 1e-9
POLE_RELATIVE_OFFSET = 1e-12
LEMMA_RADIUS = 1.0 / 3.0
MAX_CUTOFF = 1 << 16
CLASSICAL_TOL = 1e-13

Enclosure = tuple[float, float]


class HMode(str, Enum):
    """How the vanishing orders h(n) of the w*_n are specified."""

    IDENTITY = "identity"
    AFFINE = "affine"
    TABLE = "table"


@dataclass(frozen=True)
class VanishingOrderSpec:
    """Vanishing orders h(n) for the Schwarz functions w*_n in Theorem 2.

    Attributes:
        mode: IDENTITY (h(n) = n), AFFINE (h(n) = βn + γ) or TABLE.
        beta: Slope of the affine law, or of the certified lower bound for TABLE.
        gamma: Offset of the affine law or lower bound.
        values: TABLE only, h(start), h(start + 1), ...
        start: TABLE only, index of the first tabulated value.

    Beyond the table, h(n) >= βn + γ is assumed; that bound is what makes the
    tail of the h-sum checkable.
    """

    mode: HMode = HMode.IDENTITY
    beta: int = 1
    gamma: int = 0
    values: tuple[int, ...] = ()
    start: int = 1

    def __post_init__(self) -> None:
        """Validate the spec."""
        if self.beta < 1 or self.gamma < 0:
            raise ParameterError(
                "h needs beta >= 1 and gamma >= 0, "
                f"got beta={self.beta}, gamma={self.gamma}"
            )
        if self.mode is HMode.IDENTITY and (self.beta, self.gamma) != (1, 0):
            raise ParameterError("Identity h has beta = 1 and gamma = 0")
        if self.mode is HMode.TABLE:
            if not self.values:
                raise ParameterError("Tabulated h needs at least one value")
            if self.start < 1:
                raise ParameterError(f"Table start must be >= 1, got {self.start}")
            if min(self.values) < 1:
                raise ParameterError("h(n) must be >= 1")
            if any(b < a for a, b in zip(self.values, self.values[1:])):
                raise ParameterError("h must be nondecreasing")
        elif self.values:
            raise ParameterError("Only tabulated h carries explicit values")

    @classmethod
    def identity(cls) -> VanishingOrderSpec:
        """h(n) = n."""
        return cls()

    @classmethod
    def affine(cls, beta: int, gamma: int = 0) -> VanishingOrderSpec:
        """h(n) = βn + γ (identity when β = 1, γ = 0)."""
        if (beta, gamma) == (1, 0):
            return cls()
        return cls(HMode.AFFINE, beta, gamma)

    @classmethod
    def table(
        cls, values: tuple[int, ...] | list[int], start: int, beta: int, gamma: int = 0
    ) -> VanishingOrderSpec:
        """Explicit h(start..) with h(n) >= βn + γ certified past the table."""
        return cls(HMode.TABLE, beta, gamma, tuple(int(v) for v in values), start)

    @property
    def table_end(self) -> int:
        """Last tabulated index (TABLE only)."""
        return self.start + len(self.values) - 1

    def value(self, n: int) -> int:
        """h(n); for TABLE only inside the tabulated range."""
        if self.mode is HMode.TABLE:
            if not self.start <= n <= self.table_end:
                raise ParameterError(f"h({n}) is outside the tabulated range")
            return self.values[n - self.start]
        return self.beta * n + self.gamma

    def describe(self) -> str:
        """Short textual form: "n", "2*n+1" or "table[...]"."""
        if self.mode is HMode.IDENTITY:
            return "n"
        affine = f"{self.beta}*n+{self.gamma}"
        if self.mode is HMode.AFFINE:
            return affine
        return f"table[{self.start}:{','.join(map(str, self.values))}]>={affine}"


_H_PATTERN = re.compile(r"^(?:(?P<a>\d+)\*)?n(?:\+(?P<b>\d+))?$")


def parse_h_spec(text: str) -> VanishingOrderSpec:
    """Parse "n", "a*n", "n+b" or "a*n+b" (a >= 1, b >= 0)."""
    match = _H_PATTERN.match(text.replace(" ", ""))
    if match is None:
        raise ParameterError(f"Invalid h spec {text!r}; expected 'n' or 'a*n+b'")
    beta = int(match.group("a") or 1)
    gamma = int(match.group("b") or 0)
    if beta < 1:
        raise ParameterError(f"h slope must be >= 1, got {beta}")
    return VanishingOrderSpec.affine(beta, gamma)


def parse_order(text: str) -> Order:
    """Parse an order parameter: a positive integer or "inf"."""
    cleaned = text.strip().lower()
    if cleaned in {"inf", "infinity", "∞"}:
        return INF
    try:
        value = int(cleaned)
    except ValueError:
        raise ParameterError(
            f"Invalid order {text!r}; expected integer or 'inf'"
        ) from None
    return validate_order(value)


class Variant(str, Enum):
    """Which theorem's radius a problem asks for."""

    THM1 = "thm1"
    THM2 = "thm2"
    THM4 = "thm4"


@dataclass(frozen=True)
class RadiusProblem:
    """A family plus theorem variant and its order parameters.

    m1, m2 and h only matter for THM2.
    """

    family: ConcaveFamily
    variant: Variant
    N: int
    m0: Order
    m1: Order = INF
    m2: Order = INF
    h: VanishingOrderSpec = field(default_factory=VanishingOrderSpec.identity)

    def __post_init__(self) -> None:
        """Validate variant/family pairing and normalize orders."""
        if self.N < 1:
            raise ParameterError(f"N must be >= 1, got {self.N}")
        if self.variant is Variant.THM4:
            if self.family.kind is not FamilyKind.POLE:
                raise ParameterError("Theorem 4 radii need a pole family")
        elif self.family.kind is not FamilyKind.OPENING_ANGLE:
            raise ParameterError(
                f"{self.variant.value} radii need an opening-angle family"
            )
        for name in ("m0", "m1", "m2"):
            object.__setattr__(self, name, validate_order(getattr(self, name), name))

    @classmethod
    def thm1(cls, alpha: float, N: int, m0: Order) -> RadiusProblem:
        """Bohr–Rogosinski radius for subordinates (root of F)."""
        return cls(ConcaveFamily.opening_angle(alpha), Variant.THM1, N, m0)

    @classmethod
    def thm2(
        cls,
        alpha: float,
        N: int,
        m0: Order,
        m1: Order,
        m2: Order,
        h: VanishingOrderSpec | None = None,
    ) -> RadiusProblem:
        """Radius of the Schwarz-function inequality (root of K)."""
        return cls(
            ConcaveFamily.opening_angle(alpha),
            Variant.THM2,
            N,
            m0,
            m1,
            m2,
            h or VanishingOrderSpec.identity(),
        )

    @classmethod
    def thm4(cls, p: float, N: int, m0: Order) -> RadiusProblem:
        """Bohr–Rogosinski radius for the pole family (root of G)."""
        return cls(ConcaveFamily.pole(p), Variant.THM4, N, m0)

    @property
    def x_max(self) -> float:
        """Right end of the search interval, just inside the singularity."""
        if self.family.kind is FamilyKind.POLE:
            return self.family.p * (1.0 - POLE_RELATIVE_OFFSET)
        return 1.0 - OPENING_ANGLE_OFFSET

    def describe(self) -> dict[str, object]:
        """Parameters in output order (variant, alpha|p, N, m0, m1, m2, h)."""
        out: dict[str, object] = {"variant": self.variant.value}
        if self.family.kind is FamilyKind.POLE:
            out["p"] = self.family.p
        else:
            out["alpha"] = self.family.alpha
        out["N"] = self.N
        out["m0"] = format_order(self.m0)
        out["m1"] = format_order(self.m1)
        out["m2"] = format_order(self.m2)
        out["h"] = self.h.describe()
        return out


@dataclass(frozen=True)
class RadiusResult:
    """Outcome of `find_radius`.

    Attributes:
        problem: The problem that was solved.
        root: Root of the evaluator, lo <= root <= hi.
        bracket: (lo, hi) with value(lo) <= 0 < value(hi), hi - lo <= tol.
        residual: |value(root)|.
        iterations: Bisection steps taken.
        capped: THM1 only, True when root > 1/3.
        reported_radius: min(root, 1/3) for THM1, root otherwise.
        closed_form: Closed-form radius when one is known, else None.
        cutoff: Final h-sum cutoff used (THM2 with tabulated h), else None.

    """

    problem: RadiusProblem
    root: float
    bracket: tuple[float, float]
    residual: float
    iterations: int
    capped: bool
    reported_radius: float
    closed_form: float | None = None
    cutoff: int | None = None


def _check_unit(x: float) -> None:
    if not 0.0 <= x < 1.0:
        raise ParameterError(f"Radius evaluators need 0 <= x < 1, got {x}")


def eval_F(alpha: float, N: int, m0: Order, x: float) -> float:
    """F(x) = Σ_{n≥N} A_n x^n + f_α(x^{m0}) − 1/(2α).

    m0 = INF drops the middle term.
    """
    _check_unit(x)
    m0 = validate_order(m0, "m0")
    middle = 0.0 if m0 == INF else float(f_alpha_eval(alpha, order_power(x, m0)))
    return f_alpha_tail(alpha, x, N) + middle - 1.0 / (2.0 * alpha)


def convex_closed_form_F(N: int, m0: Order, x: float) -> float:
    """α = 1 specialization x^N/(1−x) + x^{m0}/(1−x^{m0}) − 1/2."""
    _check_unit(x)
    y = order_power(x, validate_order(m0, "m0"))
    return x**N / (1.0 - x) + y / (1.0 - y) - 0.5


def h_sum_enclosure(
    alpha: float,
    N: int,
    h: VanishingOrderSpec,
    x: float,
    cutoff: int = DEFAULT_TRUNCATION,
) -> Enclosure:
    """Enclosure of Σ_{n≥N} A_n x^{h(n)}.

    Identity and affine h are summed exactly: x^γ·Σ_{n≥N} A_n (x^β)^n. A table
    is summed termwise up to min(cutoff, table end). The tabulated terms past
    the cutoff are bounded by x^{h(first skipped)}·Σ A_n, since h is
    nondecreasing; the affine bound x^γ·Σ A_n (x^β)^n applies only past the
    table. The lower end drops everything not summed.
    """
    _check_unit(x)
    if x == 0.0:
        return (0.0, 0.0)
    if h.mode is not HMode.TABLE:
        value = x**h.gamma * f_alpha_tail(alpha, x**h.beta, N)
        return (value, value)
    if N < h.start:
        raise ParameterError(f"Tabulated h starts at {h.start}, but N = {N}")
    end = h.table_end
    last = min(cutoff, end)
    table = coeff_A_table(alpha, max(end, N))
    head = math.fsum(table[n] * x ** h.value(n) for n in range(N, last + 1))
    skipped = max(N, last + 1)
    middle = 0.0
    if skipped <= end:
        middle = x ** h.value(skipped) * math.fsum(table[skipped : end + 1])
    tail = x**h.gamma * f_alpha_tail(alpha, x**h.beta, max(N, end + 1))
    return (head, head + middle + tail)


def eval_K(
    alpha: float,
    N: int,
    m0: Order,
    m1: Order,
    m2: Order,
    h: VanishingOrderSpec,
    x: float,
    *,
    cutoff: int = DEFAULT_TRUNCATION,
    max_width: float | None = None,
) -> Enclosure:
    """Certified enclosure (lo, hi) of K(x); lo == hi for closed-form h.

    Raises:
        EnclosureTooWide: If max_width is given and hi - lo exceeds it.

    """
    _check_unit(x)
    m0 = validate_order(m0, "m0")
    lo, hi = h_sum_enclosure(alpha, N, h, x, cutoff)
    if max_width is not None and hi - lo > max_width:
        raise EnclosureTooWide(
            f"K enclosure at x={x} has width {hi - lo:.3e} > {max_width:.3e}",
            width=hi - lo,
            cutoff=cutoff,
        )
    middle = 0.0 if m0 == INF else float(f_alpha_eval(alpha, order_power(x, m0)))
    base = middle + distortion_term(alpha, x, m1, m2) - 1.0 / (2.0 * alpha)
    return (lo + base, hi + base)


def eval_G(p: float, N: int, m0: Order, x: float) -> float:
    """G(x) = Σ_{n≥N} c_n(p) x^n + k_p(x^{m0}) − p/(1+p)², 0 <= x < p."""
    if not 0.0 <= x < p:
        raise ParameterError(f"G needs 0 <= x < p = {p}, got {x}")
    m0 = validate_order(m0, "m0")
    middle = 0.0 if m0 == INF else float(k_p_eval(p, order_power(x, m0)))
    return k_p_tail(p, x, N) + middle - p / (1.0 + p) ** 2


class _Evaluator:
    """Certified-sign evaluator of a problem's radius function.

    For tabulated h the cutoff doubles until the enclosure is below
    `max_width`; the cutoff reached is kept for later evaluations.
    """

    def __init__(self, problem: RadiusProblem, max_width: float, cutoff: int) -> None:
        self.problem = problem
        self.max_width = max_width
        self.cutoff = cutoff

    def raw(self, x: float) -> Enclosure:
        problem = self.problem
        if problem.variant is Variant.THM1:
            value = eval_F(problem.family.alpha, problem.N, problem.m0, x)
            return (value, value)
        if problem.variant is Variant.THM4:
            value = eval_G(problem.family.p, problem.N, problem.m0, x)
            return (value, value)
        return eval_K(
            problem.family.alpha,
            problem.N,
            problem.m0,
            problem.m1,
            problem.m2,
            problem.h,
            x,
            cutoff=self.cutoff,
        )

    def __call__(self, x: float) -> Enclosure:
        lo, hi = self.raw(x)
        while hi - lo >= self.max_width:
            h = self.problem.h
            if self.cutoff >= MAX_CUTOFF or self.cutoff >= h.table_end:
                raise EnclosureTooWide(
                    f"Enclosure width {hi - lo:.3e} at x={x} with cutoff "
                    f"{self.cutoff}; extend the h table",
                    width=hi - lo,
                    cutoff=self.cutoff,
                )
            self.cutoff *= 2
            logger.debug("Raising h-sum cutoff to %d at x=%.6g", self.cutoff, x)
            lo, hi = self.raw(x)
        return (lo, hi)

    def midpoint(self, x: float) -> float:
        lo, hi = self(x)
        return 0.5 * (lo + hi)


def radius_evaluator(
    problem: RadiusProblem,
    tol: float = DEFAULT_TOL,
    cutoff: int = DEFAULT_TRUNCATION,
) -> Callable[[float], Enclosure]:
    """Return x -> (lo, hi) for the problem's radius function.

    Enclosures are refined until hi - lo < tol/10.
    """
    return _Evaluator(problem, tol / 10.0, cutoff)


def closed_form_radius(problem: RadiusProblem) -> float | None:
    """Closed-form radius for (THM1 | THM4, N = 1, m0 = inf), else None."""
    if problem.N != 1 or problem.m0 != INF:
        return None
    if problem.variant is Variant.THM1:
        t = 2.0 ** (1.0 / problem.family.alpha)
        return (t - 1.0) / (t + 1.0)
    if problem.variant is Variant.THM4:
        p = problem.family.p
        return (p + 1.0 / p + 1.0) - (math.sqrt(p) + 1.0 / math.sqrt(p)) * math.sqrt(
            p + 1.0 / p
        )
    return None


def find_radius(
    problem: RadiusProblem,
    tol: float = DEFAULT_TOL,
    *,
    cutoff: int = DEFAULT_TRUNCATION,
    polish: bool = True,
) -> RadiusResult:
    """Locate the radius of `problem` by certified bisection.

    Args:
        problem: Family, theorem variant and order parameters.
        tol: Final bracket width.
        cutoff: Starting h-sum cutoff (THM2 with tabulated h).
        polish: Run Brent's method inside the final bracket.

    Returns:
        RadiusResult; for THM1 the reported radius is capped at 1/3.

    Raises:
        ParameterError: If tol <= 0.
        NoSignChange: If the evaluator is not negative at 0 and positive at x_max.
        EnclosureTooWide: If a tabulated h cannot be summed tightly enough.

    """
    if not tol > 0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    evaluator = _Evaluator(problem, tol / 10.0, cutoff)
    lo, hi = 0.0, problem.x_max
    at_lo = evaluator.raw(lo)[1]
    at_hi = evaluator.raw(hi)[0]
    if not (at_lo < 0.0 < at_hi):
        raise NoSignChange(
            f"Evaluator has no certified sign change on [0, {hi}] "
            f"(values {at_lo:.3e}, {at_hi:.3e})",
            lo_value=at_lo,
            hi_value=at_hi,
        )

    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        enc_lo, enc_hi = evaluator(mid)
        if enc_hi < 0.0:
            lo = mid
        elif enc_lo > 0.0:
            hi = mid
        elif 0.5 * (enc_lo + enc_hi) <= 0.0:
            # Enclosure straddles 0 but is narrower than tol/10.
            lo = mid
        else:
            hi = mid
        iterations += 1

    root = 0.5 * (lo + hi)
    if polish and lo < hi:
        f_lo, f_hi = evaluator.midpoint(lo), evaluator.midpoint(hi)
        if f_lo < 0.0 < f_hi:
            root = float(brentq(evaluator.midpoint, lo, hi, xtol=tol / 100.0))
    residual = float(abs(evaluator.midpoint(root)))
    logger.debug(
        "%s root %.15g after %d bisection steps (residual %.3e)",
        problem.variant.value,
        root,
        iterations,
        residual,
    )

    capped = False
    reported = root
    if problem.variant is Variant.THM1 and root > LEMMA_RADIUS:
        capped = True
        reported = LEMMA_RADIUS
        logger.warning(
            "Root %.12g exceeds 1/3; reporting the capped radius 1/3 "
            "(no sharpness claim)",
            root,
        )
    return RadiusResult(
        problem=problem,
        root=root,
        bracket=(lo, hi),
        residual=residual,
        iterations=iterations,
        capped=capped,
        reported_radius=reported,
        closed_form=closed_form_radius(problem),
        cutoff=evaluator.cutoff if problem.h.mode is HMode.TABLE else None,
    )


def evaluate_grid(
    problem: RadiusProblem,
    xs: list[float],
    tol: float = DEFAULT_TOL,
    cutoff: int = DEFAULT_TRUNCATION,
) -> list[float]:
    """Evaluator midpoints on a grid of points in [0, x_max]."""
    evaluator = _Evaluator(problem, tol / 10.0, cutoff)
    values = []
    for x in xs:
        if problem.variant is Variant.THM2 and problem.h.mode is HMode.TABLE:
            values.append(evaluator.midpoint(x))
        else:
            values.append(evaluator.raw(x)[0])
    return values


def classical_br_radius(N: int) -> float:
    """Root in (0, 1) of 2(1+r)r^N − (1−r)², by bisection to 1e-13."""
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")

    def phi(r: float) -> float:
        return 2.0 * (1.0 + r) * r**N - (1.0 - r) ** 2

    lo, hi = 0.0, 1.0
    while hi - lo > CLASSICAL_TOL:
        mid = 0.5 * (lo + hi)
        if phi(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
