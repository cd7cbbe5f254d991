"""Configuration schema definitions for the symbolic engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass(frozen=True)
class EngineConfig:
    """Series truncation and rewrite limits."""

    truncation_order: int = 2
    dimension: int = 4
    max_rewrite_passes: int = 10000


@dataclass(frozen=True)
class PhysicsConfig:
    """Model parameters for the stress-energy pipelines."""

    interaction: Optional[int] = 4
    eta: str = "symbolic"
    xi: str = "symbolic"
    background: str = "minkowski"
    convention: str = "delta"
    potential_sign: str = "consistent"
    adiabatic_cutoff: bool = True


@dataclass(frozen=True)
class RulesConfig:
    """Named rewrite rules switched off for every pipeline."""

    disabled: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class OutputConfig:
    """Report format and destination."""

    format: str = "json"
    path: Optional[str] = None
    standalone_latex: bool = True


@dataclass(frozen=True)
class LoggingConfig:
    """Logging output configuration."""

    level: str = "WARNING"
    log_to_console: bool = True
    log_to_file: bool = False
    log_file: Optional[str] = None
    json_format: bool = False


@dataclass(frozen=True)
class MonitoringConfig:
    """Monitoring and metrics collection settings."""

    enable_metrics: bool = False


@dataclass(frozen=True)
class Config:
    """Root configuration object."""

    engine: EngineConfig = field(default_factory=EngineConfig)
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    rules: RulesConfig = field(default_factory=RulesConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    monitoring: MonitoringConfig = field(default_factory=MonitoringConfig)
