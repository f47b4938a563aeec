"""Logging utilities for bohr_lab.

This module provides:
- A filter (`QuietNumpyFilter`) that drops numpy floating-point warnings
  routed into logging by `logging.captureWarnings`.
- A preconfigured logging dict for the CLI (`cli_log_config`) using Rich on
  stderr, so stdout stays reserved for reports.

Usage:
    import logging.config
    from bohr_lab.logging_utils import cli_log_config

    logging.config.dictConfig(cli_log_config(verbose=True))
"""

from __future__ import annotations

import logging

from rich.console import Console

STDERR_CONSOLE = Console(stderr=True)

_NUMPY_NOISE = ("overflow encountered", "invalid value encountered", "divide by zero")


class QuietNumpyFilter(logging.Filter):
    """Filter out numpy RuntimeWarning echoes.

    Root-bracketing evaluations near a singularity legitimately hit overflow; the
    solver handles those values itself, so the warnings are noise.
    """

    def filter(self, record: logging.LogRecord) -> bool:
        """Decide whether a log record should be emitted."""
        if record.name != "py.warnings":
            return True
        message = record.getMessage()
        return not any(noise in message for noise in _NUMPY_NOISE)


def cli_log_config(verbose: bool = False, level: str = "INFO") -> dict:
    """Return a logging configuration dict for the CLI.

    Args:
        verbose: If True, log DEBUG for bohr_lab loggers (solver iterations,
            cutoff doublings, per-check summaries).
        level: Level used when not verbose (e.g. from BOHR_LAB_LOG_LEVEL).

    Returns:
        dict: A standard logging configuration compatible with
        `logging.config.dictConfig`.

    """
    effective = "DEBUG" if verbose else level
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "filters": {
            "quiet_numpy": {"()": "bohr_lab.logging_utils.QuietNumpyFilter"}
        },
        "formatters": {"plain": {"format": "%(message)s"}},
        "handlers": {
            "rich": {
                "class": "rich.logging.RichHandler",
                "console": "ext://bohr_lab.logging_utils.STDERR_CONSOLE",
                "rich_tracebacks": True,
                "markup": False,
                "show_level": True,
                "show_time": True,
                "show_path": False,
                "log_time_format": "[%X]",
                "level": effective,
                "formatter": "plain",
                "filters": ["quiet_numpy"],
            },
        },
        "loggers": {
            "bohr_lab": {
                "handlers": ["rich"],
                "level": effective,
                "propagate": False,
            },
            "py.warnings": {
                "handlers": ["rich"],
                "level": "WARNING",
                "propagate": False,
            },
        },
        "root": {"handlers": ["rich"], "level": "WARNING"},
    }
