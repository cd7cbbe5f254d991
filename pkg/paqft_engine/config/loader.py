"""Configuration loading utilities."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from ..utils.rational_utils import parse_parameter
from .schema import Config, EngineConfig, LoggingConfig, MonitoringConfig, OutputConfig, PhysicsConfig, RulesConfig


ENV_PREFIX = "PAQFT_ENGINE"

BACKGROUNDS = ("generic", "minkowski", "maximally-symmetric")
CONVENTIONS = ("delta", "i-delta")
POTENTIAL_SIGNS = ("consistent", "printed")
OUTPUT_FORMATS = ("json", "latex")
INTERACTIONS = (None, 3, 4)


def _load_yaml_config(path: Optional[Path]) -> Dict[str, Any]:
    if path is None:
        return {}
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {path}")
    with path.open("r", encoding="utf-8") as fp:
        data = yaml.safe_load(fp) or {}
    if not isinstance(data, dict):
        raise ValueError("Configuration file must contain a mapping at the root level")
    return data


def _env_key(section: str, field: str) -> str:
    return f"{ENV_PREFIX}_{section}_{field}".upper()


def _parse_interaction(value: str) -> Optional[int]:
    if value.strip().lower() in {"none", "free", ""}:
        return None
    return int(value)


def _parse_flag(value: str) -> bool:
    return value.lower() in {"1", "true", "yes"}


def _apply_env_overrides(config_dict: Dict[str, Any]) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}

    def set_override(section: str, field: str, cast=str):
        env_name = _env_key(section, field)
        value = os.getenv(env_name)
        if value is None:
            return
        try:
            overrides.setdefault(section, {})[field] = cast(value)
        except ValueError as exc:
            raise ValueError(f"Invalid value for environment variable {env_name}: {value}") from exc

    # Engine
    set_override("engine", "truncation_order", int)
    set_override("engine", "dimension", int)
    set_override("engine", "max_rewrite_passes", int)

    # Physics
    set_override("physics", "interaction", _parse_interaction)
    for key in ("eta", "xi", "background", "convention", "potential_sign"):
        set_override("physics", key)
    set_override("physics", "adiabatic_cutoff", _parse_flag)

    # Rules
    set_override("rules", "disabled", lambda v: [name.strip() for name in v.split(",") if name.strip()])

    # Output
    set_override("output", "format")
    set_override("output", "path")
    set_override("output", "standalone_latex", _parse_flag)

    # Logging
    set_override("logging", "level")
    set_override("logging", "log_to_console", _parse_flag)
    set_override("logging", "log_to_file", _parse_flag)
    set_override("logging", "log_file")
    set_override("logging", "json_format", _parse_flag)

    # Monitoring
    set_override("monitoring", "enable_metrics", _parse_flag)

    def merge(d: Dict[str, Any], o: Dict[str, Any]) -> Dict[str, Any]:
        for key, value in o.items():
            if isinstance(value, dict):
                d[key] = merge(dict(d.get(key) or {}), value)
            else:
                d[key] = value
        return d

    return merge(config_dict.copy(), overrides)


def _check_choice(section: str, key: str, value: Any, choices) -> None:
    if value not in choices:
        raise ValueError(f"Invalid value for {section}.{key}: {value!r}; expected one of {list(choices)}")


def _validate(config: Config) -> Config:
    physics = config.physics
    _check_choice("physics", "interaction", physics.interaction, INTERACTIONS)
    _check_choice("physics", "background", physics.background, BACKGROUNDS)
    _check_choice("physics", "convention", physics.convention, CONVENTIONS)
    _check_choice("physics", "potential_sign", physics.potential_sign, POTENTIAL_SIGNS)
    _check_choice("output", "format", config.output.format, OUTPUT_FORMATS)
    for key in ("eta", "xi"):
        try:
            parse_parameter(getattr(physics, key))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"Invalid value for physics.{key}: {getattr(physics, key)!r}") from exc
    if config.engine.truncation_order < 0:
        raise ValueError("engine.truncation_order must be non-negative")
    if config.engine.dimension < 2:
        raise ValueError("engine.dimension must be at least 2")
    if config.engine.max_rewrite_passes < 1:
        raise ValueError("engine.max_rewrite_passes must be positive")
    return config


def _section(data: Dict[str, Any], name: str) -> Dict[str, Any]:
    section = data.get(name) or {}
    if not isinstance(section, dict):
        raise ValueError(f"Configuration section {name!r} must be a mapping")
    return section


def _build_config(data: Dict[str, Any]) -> Config:
    physics_data = dict(_section(data, "physics"))
    for key in ("eta", "xi"):
        if key in physics_data:
            physics_data[key] = str(physics_data[key])
    if isinstance(physics_data.get("interaction"), str):
        physics_data["interaction"] = _parse_interaction(physics_data["interaction"])

    try:
        config = Config(
            engine=EngineConfig(**_section(data, "engine")),
            physics=PhysicsConfig(**physics_data),
            rules=RulesConfig(**_section(data, "rules")),
            output=OutputConfig(**_section(data, "output")),
            logging=LoggingConfig(**_section(data, "logging")),
            monitoring=MonitoringConfig(**_section(data, "monitoring")),
        )
    except TypeError as exc:
        raise ValueError(f"Unknown configuration key: {exc}") from exc
    return _validate(config)


def load_config(config_path: Optional[str] = None) -> Config:
    """Load configuration from YAML and environment variables."""

    path = Path(config_path) if config_path else None
    config_dict = _load_yaml_config(path)
    config_dict = _apply_env_overrides(config_dict)
    return _build_config(config_dict)
