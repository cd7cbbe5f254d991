"""Tests for YAML and environment configuration loading."""

from __future__ import annotations

from pathlib import Path

import pytest

from paqft_engine.config.loader import load_config
from paqft_engine.config.schema import Config


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    import os

    for key in list(os.environ):
        if key.startswith("PAQFT_ENGINE_"):
            monkeypatch.delenv(key)


def write_config(tmp_path: Path, text: str) -> str:
    path = tmp_path / "config.yaml"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_defaults_without_a_file() -> None:
    config = load_config()
    assert config == Config()
    assert config.physics.interaction == 4
    assert config.physics.eta == "symbolic"


def test_yaml_values_are_read(tmp_path: Path) -> None:
    path = write_config(
        tmp_path,
        "physics:\n  interaction: 3\n  eta: 1/3\n  convention: i-delta\nrules:\n  disabled: [background_v1]\n",
    )
    config = load_config(path)
    assert config.physics.interaction == 3
    assert config.physics.eta == "1/3"
    assert config.physics.convention == "i-delta"
    assert config.rules.disabled == ["background_v1"]


def test_environment_overrides_yaml(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    path = write_config(tmp_path, "physics:\n  interaction: 3\n")
    monkeypatch.setenv("PAQFT_ENGINE_PHYSICS_INTERACTION", "free")
    monkeypatch.setenv("PAQFT_ENGINE_RULES_DISABLED", "adiabatic_cutoff, background_v1")
    monkeypatch.setenv("PAQFT_ENGINE_MONITORING_ENABLE_METRICS", "true")
    config = load_config(path)
    assert config.physics.interaction is None
    assert config.rules.disabled == ["adiabatic_cutoff", "background_v1"]
    assert config.monitoring.enable_metrics


@pytest.mark.parametrize(
    "text",
    [
        "physics:\n  interaction: 5\n",
        "physics:\n  background: de-sitter\n",
        "physics:\n  xi: one-sixth\n",
        "engine:\n  truncation_order: -1\n",
        "engine:\n  unknown_key: 1\n",
        "monitoring:\n  metrics_backend: prometheus\n",
        "- not a mapping\n",
    ],
)
def test_invalid_values_rejected(tmp_path: Path, text: str) -> None:
    with pytest.raises(ValueError):
        load_config(write_config(tmp_path, text))


def test_invalid_environment_value(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("PAQFT_ENGINE_ENGINE_DIMENSION", "four")
    with pytest.raises(ValueError):
        load_config()


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / "absent.yaml"))
