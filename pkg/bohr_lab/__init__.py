"""bohr_lab package root.

Sharp Bohr–Rogosinski radii for the concave univalent families Ĉ₀(α)
(opening angle πα at infinity, 1 <= α <= 2) and Ĉ_p (simple pole at p), plus
sampled certification of the inequalities behind them.

Provides:
- Version info (`__version__`).
- Truncated power-series arithmetic and Schwarz functions (`series`).
- The extremal functions f_α and k_p and their coefficients (`families`).
- Radius evaluators and the certified root finder (`radius`).
- The certification harness and acceptance battery (`verify`).
- The `bohr-lab` command line (`cli`).
"""

from __future__ import annotations

__version__ = "0.1.0"

from bohr_lab.errors import (
    BohrLabError,
    CompositionError,
    ConfigError,
    EnclosureTooWide,
    NoSignChange,
    ParameterError,
    SolverError,
)
from bohr_lab.families import (
    INF,
    ROGOSINSKI_RADIUS,
    ConcaveFamily,
    FamilyKind,
    coeff_A,
    coeff_c,
    extremal_data,
)
from bohr_lab.radius import (
    RadiusProblem,
    RadiusResult,
    VanishingOrderSpec,
    Variant,
    classical_br_radius,
    find_radius,
)
from bohr_lab.series import SchwarzFunction, TruncatedSeries

__all__ = [
    "INF",
    "ROGOSINSKI_RADIUS",
    "BohrLabError",
    "CompositionError",
    "ConcaveFamily",
    "ConfigError",
    "EnclosureTooWide",
    "FamilyKind",
    "NoSignChange",
    "ParameterError",
    "RadiusProblem",
    "RadiusResult",
    "SchwarzFunction",
    "SolverError",
    "TruncatedSeries",
    "VanishingOrderSpec",
    "Variant",
    "__version__",
    "classical_br_radius",
    "coeff_A",
    "coeff_c",
    "extremal_data",
    "find_radius",
]
