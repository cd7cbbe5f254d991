"""Simple in-memory metrics recorder for the rewrite and pipeline stages."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict


@dataclass
class MetricsRecorder:
    counters: Dict[str, float] = field(default_factory=dict)
    stage_durations: Dict[str, float] = field(default_factory=dict)

    def increment(self, name: str, value: float = 1.0) -> None:
        self.counters[name] = self.counters.get(name, 0.0) + value

    def observe_stage_duration(self, stage: str, duration: float) -> None:
        self.stage_durations[stage] = self.stage_durations.get(stage, 0.0) + duration

    def observe_rule(self, rule: str, count: int = 1) -> None:
        self.increment(f"rule.{rule}", count)

    def observe_terms(self, stage: str, count: int) -> None:
        self.increment(f"terms.{stage}", count)

    def snapshot(self, include_durations: bool = False) -> Dict[str, float]:
        """Deterministic counters; wall-clock durations only on request."""

        data = dict(sorted(self.counters.items()))
        if include_durations:
            for stage, duration in sorted(self.stage_durations.items()):
                data[f"duration.{stage}"] = duration
        return data
