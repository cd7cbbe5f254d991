"""Scaling-degree calculus and the Hadamard coefficient v1."""

from .hadamard import V1Formula, v1_eval, v1_formula
from .scaling import (
    DistDescriptor,
    Extension,
    ExtensionClass,
    ScalingRow,
    classify_extension,
    degree_of_divergence,
    delta_at_point,
    feynman_power,
    scaling_degree,
    scaling_table,
)

__all__ = [
    "DistDescriptor",
    "Extension",
    "ExtensionClass",
    "ScalingRow",
    "V1Formula",
    "classify_extension",
    "degree_of_divergence",
    "delta_at_point",
    "feynman_power",
    "scaling_degree",
    "scaling_table",
    "v1_eval",
    "v1_formula",
]
