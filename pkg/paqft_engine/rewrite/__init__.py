"""Named rewrite rules, the staged rule engine and tensor operations."""

from .background import GENERIC, MAXIMALLY_SYMMETRIC, MINKOWSKI, BackgroundDescriptor, Convention, Regime, parse_background
from .engine import CLASSICAL, DIVERGENCE, PRESETS, TRACE, UNITARITY, Ruleset, apply_rules, load_ruleset
from .operations import apply_divergence, reduce_modulo_eom, trace_contract
from .rules import (
    REGISTRY,
    STAGES,
    IndexContractionError,
    IterationCapError,
    RewriteContext,
    RewriteError,
    RewriteRule,
    UnknownRuleError,
)

__all__ = [
    "BackgroundDescriptor",
    "CLASSICAL",
    "Convention",
    "DIVERGENCE",
    "GENERIC",
    "IndexContractionError",
    "IterationCapError",
    "MAXIMALLY_SYMMETRIC",
    "MINKOWSKI",
    "PRESETS",
    "REGISTRY",
    "Regime",
    "RewriteContext",
    "RewriteError",
    "RewriteRule",
    "Ruleset",
    "STAGES",
    "TRACE",
    "UNITARITY",
    "UnknownRuleError",
    "apply_divergence",
    "apply_rules",
    "load_ruleset",
    "parse_background",
    "reduce_modulo_eom",
    "trace_contract",
]
