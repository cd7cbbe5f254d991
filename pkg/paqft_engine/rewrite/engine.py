"""Staged fixed-point rewriting of symbolic expressions."""

from __future__ import annotations

import logging
import time
from collections import Counter
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from ..config.loader import load_config
from ..config.schema import RulesConfig
from ..expr.canonical import FULL_POLICY, KERNEL_SYMMETRY, CanonicalPolicy
from ..expr.expression import SymExpr
from ..expr.monomial import Monomial
from ..logging_utils.logger import get_logger, log_with_context
from ..monitoring.metrics import MetricsRecorder
from .background import MINKOWSKI, BackgroundDescriptor, parse_background
from .rules import STAGES, IterationCapError, RewriteContext, RewriteError, RewriteRule, get_rule


DEFAULT_MAX_PASSES = 10000

POLICY_TOGGLES = ("kernel_symmetry", "scalar_derivative_commute")
SPLIT_RULES = frozenset({"feynman_split", "anti_feynman_split", "causal_split"})


@dataclass(frozen=True)
class Ruleset:
    """Named rules plus the two canonicalization toggles."""

    rules: Tuple[str, ...]
    kernel_symmetry: bool = True
    scalar_derivative_commute: bool = True

    def __post_init__(self) -> None:
        for name in self.rules:
            get_rule(name)
        if "symmetric_basis" in self.rules and SPLIT_RULES & set(self.rules):
            raise RewriteError("symmetric_basis cannot be combined with the kernel split rules")

    def policy(self) -> Optional[CanonicalPolicy]:
        if self.kernel_symmetry:
            return FULL_POLICY if self.scalar_derivative_commute else KERNEL_SYMMETRY
        if self.scalar_derivative_commute:
            return CanonicalPolicy(commute_scalar_derivatives=True)
        return None

    def without(self, *names: str) -> "Ruleset":
        toggles = {name: False for name in names if name in POLICY_TOGGLES}
        dropped = set(names) - set(POLICY_TOGGLES)
        for name in dropped:
            get_rule(name)
        return replace(self, rules=tuple(rule for rule in self.rules if rule not in dropped), **toggles)

    def stage_rules(self, stage: str, background: BackgroundDescriptor) -> List[RewriteRule]:
        selected = [get_rule(name) for name in self.rules]
        return [rule for rule in selected if rule.stage == stage and rule.applies(background)]


GEOMETRY_RULES = (
    "metric_compatibility",
    "box_commutator",
    "metric_contraction",
    "curvature_traces",
    "contracted_bianchi",
    "einstein_expand",
)
BACKGROUND_RULES = ("background_curvature", "background_v1")

DIVERGENCE = Ruleset(
    GEOMETRY_RULES + ("box_to_p0", "parametrix_eom", "delta_collapse", "adiabatic_cutoff") + BACKGROUND_RULES
)
TRACE = DIVERGENCE.without("adiabatic_cutoff")
# Kernel exchange needs no rule of its own: the KERNEL_SYMMETRY policy makes Δ
# antisymmetric, so symmetric integrands against Δ cancel during canonicalization.
UNITARITY = Ruleset(("symmetric_basis", "disjoint_support"), scalar_derivative_commute=False)
CLASSICAL = Ruleset(GEOMETRY_RULES + ("box_to_p0",) + BACKGROUND_RULES)

PRESETS: Dict[str, Ruleset] = {
    "divergence": DIVERGENCE,
    "trace": TRACE,
    "unitarity": UNITARITY,
    "classical": CLASSICAL,
}


def ruleset_from_config(rules: RulesConfig, base: Ruleset = DIVERGENCE) -> Ruleset:
    return base.without(*rules.disabled) if rules.disabled else base


def load_ruleset(path: str, base: Ruleset = DIVERGENCE) -> Tuple[Ruleset, BackgroundDescriptor]:
    """Read disabled rules and the background from a YAML file in the config layout."""

    config = load_config(path)
    background = parse_background(config.physics.background, config.physics.convention)
    return ruleset_from_config(config.rules, base), background


def _sweep(
    expr: SymExpr, rules: Sequence[RewriteRule], context: RewriteContext, fired: Counter
) -> Tuple[SymExpr, bool]:
    produced: List[Monomial] = []
    changed = False
    for monomial in expr:
        for rule in rules:
            result = rule(monomial, context)
            if result is not None:
                produced.extend(result)
                fired[rule.name] += 1
                changed = True
                break
        else:
            produced.append(monomial)
    if not changed:
        return expr, False
    return SymExpr.build(produced, expr.truncation, expr.policy), True


def apply_rules(
    expr: SymExpr,
    ruleset: Ruleset,
    background: BackgroundDescriptor = MINKOWSKI,
    context: Optional[RewriteContext] = None,
    metrics: Optional[MetricsRecorder] = None,
    max_passes: int = DEFAULT_MAX_PASSES,
) -> SymExpr:
    """Run every stage to a fixed point, repeating full passes until nothing changes."""

    context = replace(context or RewriteContext(), background=background)
    current = expr.with_policy(ruleset.policy())
    fired: Counter = Counter()
    sweeps = 0
    changed = True
    while changed:
        changed = False
        for stage in STAGES:
            rules = ruleset.stage_rules(stage, background)
            if not rules:
                continue
            started = time.perf_counter()
            while True:
                sweeps += 1
                if sweeps > max_passes:
                    raise IterationCapError(
                        f"No fixed point after {max_passes} sweeps (stage {stage!r}, {len(current)} terms)"
                    )
                current, progressed = _sweep(current, rules, context, fired)
                if not progressed:
                    break
                changed = True
            if metrics is not None:
                metrics.observe_stage_duration(stage, time.perf_counter() - started)
                metrics.observe_terms(stage, len(current))

    if metrics is not None:
        for name, count in sorted(fired.items()):
            metrics.observe_rule(name, count)
    log_with_context(
        get_logger(),
        logging.DEBUG,
        "Rewriting reached a fixed point",
        sweeps=sweeps,
        terms=len(current),
        background=background.regime.value,
        rules_fired=dict(sorted(fired.items())),
    )
    return current
