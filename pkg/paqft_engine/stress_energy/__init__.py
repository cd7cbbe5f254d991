"""Stress-energy functionals, second-order conservation and trace pipelines."""

from .build import build_set
from .pipelines import (
    AmbiguityTensor,
    ConservationCheck,
    EtaSolveError,
    ambiguity_tensor,
    check_conservation,
    classical_divergence,
    classical_trace,
    divergence_order2,
    solve_eta,
    trace_cubic,
    trace_order2,
)
from .spec import SETSpec
from .template import SplittingTemplate, splitting_formula, splitting_template

__all__ = [
    "AmbiguityTensor",
    "ConservationCheck",
    "EtaSolveError",
    "SETSpec",
    "SplittingTemplate",
    "ambiguity_tensor",
    "build_set",
    "check_conservation",
    "classical_divergence",
    "classical_trace",
    "divergence_order2",
    "solve_eta",
    "splitting_formula",
    "splitting_template",
    "trace_cubic",
    "trace_order2",
]
