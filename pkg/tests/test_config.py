from __future__ import annotations

import os

import pytest

from bohr_lab.config import DEFAULT_TOL, DEFAULT_TRUNCATION, build_config
from bohr_lab.errors import ConfigError


def test_defaults_apply_without_environment(tmp_path) -> None:
    config = build_config(str(tmp_path / "missing.env"))
    assert config.threads() == (os.cpu_count() or 1)
    assert config.truncation() == DEFAULT_TRUNCATION
    assert config.tolerance() == DEFAULT_TOL
    assert config.log_level() == "INFO"


def test_env_file_values_are_read(tmp_path) -> None:
    env_file = tmp_path / ".env"
    env_file.write_text("BOHR_LAB_TOL=1e-9\nBOHR_LAB_THREADS=3\n")

    config = build_config(str(env_file))
    assert config.tolerance() == 1e-9
    assert config.threads() == 3


def test_environment_overrides_env_file(
    tmp_path, monkeypatch: pytest.MonkeyPatch
) -> None:
    env_file = tmp_path / ".env"
    env_file.write_text("BOHR_LAB_TRUNCATION=64\n")
    monkeypatch.setenv("BOHR_LAB_TRUNCATION", "32")
    monkeypatch.setenv("BOHR_LAB_LOG_LEVEL", "debug")

    config = build_config(str(env_file))
    assert config.truncation() == 32
    assert config.log_level() == "DEBUG"


def test_unknown_keys_fall_back_to_caller_default() -> None:
    config = build_config(None)
    assert config("SOMETHING_ELSE", default="fallback") == "fallback"
    assert config("BOHR_LAB_TRUNCATION", cast=str) == str(DEFAULT_TRUNCATION)


@pytest.mark.parametrize(
    "key,value,accessor",
    [
        ("BOHR_LAB_THREADS", "0", "threads"),
        ("BOHR_LAB_THREADS", "many", "threads"),
        ("BOHR_LAB_TRUNCATION", "4", "truncation"),
        ("BOHR_LAB_TOL", "-1", "tolerance"),
        ("BOHR_LAB_TOL", "tiny", "tolerance"),
        ("BOHR_LAB_LOG_LEVEL", "LOUD", "log_level"),
    ],
)
def test_invalid_values_raise_config_error(
    monkeypatch: pytest.MonkeyPatch, key: str, value: str, accessor: str
) -> None:
    monkeypatch.setenv(key, value)
    config = build_config(None)
    with pytest.raises(ConfigError):
        getattr(config, accessor)()
