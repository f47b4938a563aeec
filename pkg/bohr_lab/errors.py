"""Exception types and exit-code translation for bohr_lab.

Every failure the library can signal derives from `BohrLabError`, which
carries the process exit code the CLI should use for it.

Classification:
- ParameterError (2): a precondition or domain violation in the caller's
  input (family parameters, evaluation points, series shapes, CLI values).
- SolverError (3): the numerics could not certify a result (no sign change,
  an enclosure that stays too wide, overflow during composition).

Anything that is not a `BohrLabError` is treated as an internal failure and
also maps to 3. `report_failure` is the single place where that mapping is
logged, so command code never decides exit codes on its own.
"""

from __future__ import annotations

import logging

logger = logging.getLogger("bohr_lab.errors")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2
EXIT_FAILURE = 3


class BohrLabError(Exception):
    """Base class for all bohr_lab errors."""

    exit_code: int = EXIT_FAILURE


class ParameterError(BohrLabError, ValueError):
    """Input outside the documented domain of an operation."""

    exit_code = EXIT_INVALID


class ConfigError(ParameterError):
    """Invalid value found in the environment or a `.env` file."""


class SolverError(BohrLabError):
    """A numerical procedure could not produce a certified result."""

    exit_code = EXIT_FAILURE


class NoSignChange(SolverError):
    """The radius evaluator is not negative at 0 or not positive near x_max.

    Attributes:
        lo_value: Evaluator value at the left end of the search interval.
        hi_value: Evaluator value at the right end of the search interval.

    """

    def __init__(self, message: str, *, lo_value: float, hi_value: float) -> None:
        """Record the offending end-point values alongside the message."""
        super().__init__(message)
        self.lo_value = lo_value
        self.hi_value = hi_value


class EnclosureTooWide(SolverError):
    """The h-sum enclosure could not be tightened below the requested width."""

    def __init__(self, message: str, *, width: float, cutoff: int) -> None:
        """Record the last enclosure width and the cutoff that produced it."""
        super().__init__(message)
        self.width = width
        self.cutoff = cutoff


class CompositionError(SolverError):
    """A series composition produced non-finite coefficients."""


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code contract.

    Args:
        exc: Exception raised while running a command.

    Returns:
        2 for parameter problems, 3 for solver and unexpected failures.

    """
    if isinstance(exc, BohrLabError):
        return exc.exit_code
    return EXIT_FAILURE


def report_failure(exc: BaseException) -> int:
    """Log a command failure and return its exit code.

    Parameter problems are logged as warnings without a traceback; solver
    failures and unexpected exceptions are logged as errors with one.

    Args:
        exc: Exception raised while running a command.

    Returns:
        The exit code from `exit_code_for`.

    """
    code = exit_code_for(exc)
    if code == EXIT_INVALID:
        logger.warning("Invalid parameters: %s", exc)
    elif isinstance(exc, BohrLabError):
        logger.error("Solver failure (%s): %s", type(exc).__name__, exc, exc_info=exc)
    else:
        logger.error(
            "Unhandled exception: %s\nType: %s",
            exc,
            type(exc).__name__,
            exc_info=exc,
        )
    return code
