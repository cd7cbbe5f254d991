"""Polynomial self-interaction V = -(1/n!) ∫ φⁿ h."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import sympy

from ..expr.coeff import CoeffElem
from ..expr.errors import StructuralError
from ..expr.expression import DEFAULT_TRUNCATION
from ..functional.builders import smeared_power
from ..functional.core import Functional


SUPPORTED_POWERS = (3, 4)


@dataclass(frozen=True)
class InteractionSpec:
    power: int = 4
    test_label: str = "h"

    def __post_init__(self) -> None:
        if self.power not in SUPPORTED_POWERS:
            raise StructuralError(f"Interaction power must be one of {SUPPORTED_POWERS}, got {self.power!r}")

    @property
    def normalization(self) -> CoeffElem:
        return CoeffElem.of(sympy.Rational(-1, factorial(self.power)))

    @property
    def eom_coefficient(self) -> CoeffElem:
        """λ-coefficient of P₀φ = λ φ^{n-1}/(n-1)!."""

        return CoeffElem.of(sympy.Rational(1, factorial(self.power - 1)))

    def potential(self, truncation: int = DEFAULT_TRUNCATION) -> Functional:
        return smeared_power(self.power, self.test_label, "y", self.normalization, truncation)
