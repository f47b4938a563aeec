"""Configuration utilities for bohr_lab.

Provides a configuration accessor that reads the process environment and an
optional `.env` file, with library defaults injected for the keys bohr_lab
understands.

Keys:
    BOHR_LAB_THREADS: Worker cap for the verification harness.
    BOHR_LAB_TRUNCATION: Default truncation order T for series work.
    BOHR_LAB_TOL: Default root-finding tolerance.
    BOHR_LAB_LOG_LEVEL: Logging level name for the CLI.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Callable, TypeVar

from starlette.config import Config

from bohr_lab.errors import ConfigError

T = TypeVar("T")

DEFAULT_TRUNCATION = 256
DEFAULT_TOL = 1e-12
MIN_TRUNCATION = 8


class BohrLabConfig:
    """Configuration wrapper with bohr_lab defaults.

    Wraps a Starlette Config object; library defaults apply only when neither
    the environment nor the `.env` file sets a key.

    Attributes:
        _config: The underlying Starlette Config object.
        _defaults: Library default values, computed lazily.

    """

    def __init__(self, env_file: str | None = ".env") -> None:
        """Initialize with an optional environment file.

        Args:
            env_file: Path to a .env file. A missing file is not an error; only
                the process environment is used then.

        """
        if env_file is not None and Path(env_file).exists():
            self._config = Config(env_file)
        else:
            self._config = Config()

        self._defaults: dict[str, Callable[[], Any]] = {
            "BOHR_LAB_THREADS": lambda: os.cpu_count() or 1,
            "BOHR_LAB_TRUNCATION": lambda: DEFAULT_TRUNCATION,
            "BOHR_LAB_TOL": lambda: DEFAULT_TOL,
            "BOHR_LAB_LOG_LEVEL": lambda: "INFO",
        }

    def __call__(
        self,
        key: str,
        *,
        cast: Callable[[Any], T] | type[T] | None = None,
        default: T | None = None,
    ) -> Any:
        """Get a configuration value.

        Resolution order:
        1. Environment variables and the `.env` file (via Starlette Config)
        2. bohr_lab defaults
        3. Provided default value

        Args:
            key: The configuration key to look up.
            cast: Optional type to cast the value to.
            default: Default value if not found anywhere.

        Returns:
            The configuration value, cast if specified.

        Raises:
            ConfigError: If the value cannot be cast.
            KeyError: If the key is unknown and no default is given.

        """
        try:
            if key in self._defaults:
                value = self._config(key, default=None)
                if value is None:
                    value = self._defaults[key]()
                return cast(value) if cast is not None else value
            if cast is not None:
                return self._config(key, cast=cast, default=default)
            if default is not None:
                return self._config(key, default=default)
            return self._config(key)
        except ValueError as exc:
            raise ConfigError(f"Invalid value for {key}: {exc}") from exc

    def threads(self) -> int:
        """Return the harness worker cap (>= 1)."""
        threads = self("BOHR_LAB_THREADS", cast=int)
        if threads < 1:
            raise ConfigError(f"BOHR_LAB_THREADS must be >= 1, got {threads}")
        return threads

    def truncation(self) -> int:
        """Return the default truncation order (>= 8)."""
        order = self("BOHR_LAB_TRUNCATION", cast=int)
        if order < MIN_TRUNCATION:
            raise ConfigError(
                f"BOHR_LAB_TRUNCATION must be >= {MIN_TRUNCATION}, got {order}"
            )
        return order

    def tolerance(self) -> float:
        """Return the default root-finding tolerance (> 0)."""
        tol = self("BOHR_LAB_TOL", cast=float)
        if not tol > 0:
            raise ConfigError(f"BOHR_LAB_TOL must be > 0, got {tol}")
        return tol

    def log_level(self) -> str:
        """Return the configured logging level name, upper-cased."""
        level = str(self("BOHR_LAB_LOG_LEVEL")).upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ConfigError(f"BOHR_LAB_LOG_LEVEL is not a level name: {level}")
        return level


def build_config(env_file: str | None = ".env") -> BohrLabConfig:
    """Build a configuration accessor with bohr_lab defaults.

    Args:
        env_file: Path to a .env file to load variables from (optional).

    Returns:
        BohrLabConfig: A configuration accessor with library defaults.

    """
    return BohrLabConfig(env_file)
