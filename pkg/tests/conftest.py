from __future__ import annotations

import logging
import os

import pytest

from bohr_lab.verify import CertificationConfig


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch, tmp_path) -> None:
    """Keep BOHR_LAB_* settings and a stray .env out of every test.

    Tests run from a temporary directory so `build_config()` only sees the
    library defaults unless a test sets a variable itself.
    """
    for key in list(os.environ):
        if key.startswith("BOHR_LAB_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture(autouse=True)
def restore_logging():
    """Undo the CLI's dictConfig so caplog sees bohr_lab records again."""
    yield
    logging.captureWarnings(False)
    for name in ("bohr_lab", "py.warnings"):
        logger = logging.getLogger(name)
        logger.handlers.clear()
        logger.propagate = True
        logger.setLevel(logging.NOTSET)


@pytest.fixture
def small_cfg() -> CertificationConfig:
    """A cheap certification config for unit tests."""
    return CertificationConfig(samples=4, truncation=64, threads=2, theta_grid=32)
