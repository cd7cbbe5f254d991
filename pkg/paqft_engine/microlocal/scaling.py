"""Scaling degree, degree of divergence and extension classification for model singularities."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

import sympy

from ..utils.rational_utils import to_rational


class Extension(str, Enum):
    UNIQUE = "unique-extension"
    AMBIGUOUS = "ambiguous"
    NO_FINITE_SD = "no-finite-sd"


@dataclass(frozen=True)
class DistDescriptor:
    """A model diagonal singularity: σ^{-p} log^q σ, or δ^{(j)} on the submanifold.

    Exactly one of `sigma_power` and `delta_order` is set unless the descriptor is
    marked `infinite`.
    """

    dimension: int
    codimension: int
    sigma_power: Optional[sympy.Rational] = None
    log_power: int = 0
    delta_order: Optional[int] = None
    infinite: bool = False

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ValueError(f"Dimension must be at least 2, got {self.dimension}")
        if self.codimension < 1:
            raise ValueError(f"Codimension must be at least 1, got {self.codimension}")
        if self.log_power < 0:
            raise ValueError("Log power must be non-negative")
        if self.sigma_power is not None:
            object.__setattr__(self, "sigma_power", to_rational(self.sigma_power))
        if self.infinite:
            return
        if (self.sigma_power is None) == (self.delta_order is None):
            raise ValueError("Exactly one of sigma_power and delta_order must be given")
        if self.delta_order is not None and self.delta_order < 0:
            raise ValueError("Delta derivative order must be non-negative")


def feynman_power(k: int, dimension: int = 4) -> DistDescriptor:
    """Leading singularity of H_F^k on the diagonal of M × M: σ^{k(2-d)/2}, logarithmic in d = 2."""

    if k < 1:
        raise ValueError("Feynman powers start at k = 1")
    if dimension == 2:
        return DistDescriptor(dimension, dimension, sigma_power=sympy.Integer(0), log_power=k)
    return DistDescriptor(dimension, dimension, sigma_power=sympy.Rational(k * (dimension - 2), 2))


def delta_at_point(dimension: int, order: int = 0) -> DistDescriptor:
    return DistDescriptor(dimension, dimension, delta_order=order)


def scaling_degree(desc: DistDescriptor) -> Optional[sympy.Rational]:
    """None when the descriptor has no finite scaling degree."""

    if desc.infinite:
        return None
    if desc.sigma_power is not None:
        return 2 * desc.sigma_power
    return sympy.Integer(desc.codimension + desc.delta_order)


def degree_of_divergence(desc: DistDescriptor) -> Optional[sympy.Integer]:
    """ρ = ⌊sd - codim⌋."""

    sd = scaling_degree(desc)
    if sd is None:
        return None
    return sympy.floor(sd - desc.codimension)


def opposite_sign_value(desc: DistDescriptor) -> Optional[sympy.Integer]:
    """⌊codim - sd⌋, the opposite-sign variant kept for comparison in reports."""

    sd = scaling_degree(desc)
    if sd is None:
        return None
    return sympy.floor(desc.codimension - sd)


@dataclass(frozen=True)
class ExtensionClass:
    kind: Extension
    scaling_degree: Optional[sympy.Rational]
    degree_of_divergence: Optional[sympy.Integer]
    family_size: int = 0
    free_parameters: int = 0
    opposite_sign_value: Optional[sympy.Integer] = None
    suspected_sign_typo: bool = True


def classify_extension(desc: DistDescriptor) -> ExtensionClass:
    """Unique below the codimension; otherwise δ^{(j)} ambiguities for j = 0…ρ."""

    sd = scaling_degree(desc)
    if sd is None:
        return ExtensionClass(Extension.NO_FINITE_SD, None, None)
    rho = degree_of_divergence(desc)
    opposite = opposite_sign_value(desc)
    if sd < desc.codimension:
        return ExtensionClass(Extension.UNIQUE, sd, rho, opposite_sign_value=opposite)
    order = int(rho)
    # derivatives of δ up to order ρ in `codimension` transverse directions
    parameters = int(sympy.binomial(order + desc.codimension, desc.codimension))
    return ExtensionClass(Extension.AMBIGUOUS, sd, rho, order + 1, parameters, opposite)


@dataclass(frozen=True)
class ScalingRow:
    k: int
    scaling_degree: sympy.Rational
    degree_of_divergence: sympy.Integer
    classification: Extension
    family_size: int
    opposite_sign_value: sympy.Integer


def scaling_table(dimension: int, ks: Sequence[int]) -> List[ScalingRow]:
    rows: List[ScalingRow] = []
    for k in ks:
        result = classify_extension(feynman_power(k, dimension))
        rows.append(
            ScalingRow(
                k,
                result.scaling_degree,
                result.degree_of_divergence,
                result.kind,
                result.family_size,
                result.opposite_sign_value,
            )
        )
    return rows
