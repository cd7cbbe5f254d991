"""Parameters of a stress-energy computation."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Tuple

import sympy

from ..config.schema import Config
from ..expr.coeff import ETA, XI
from ..perturbation.interaction import SUPPORTED_POWERS, InteractionSpec
from ..rewrite.background import MINKOWSKI, BackgroundDescriptor, parse_background
from ..utils.rational_utils import SYMBOLIC, Parameter, parse_parameter


POTENTIAL_SIGNS = {"consistent": 1, "printed": -1}


@dataclass(frozen=True)
class SETSpec:
    """Interaction power (None for the free field), ξ, η and the background.

    ξ and η are either the string "symbolic" or exact rationals. `potential_sign` selects
    +(λ/n!)gΦⁿ ("consistent") or the displayed -(λ/n!)gΦⁿ ("printed").
    """

    interaction: Optional[int] = 4
    xi: Parameter = SYMBOLIC
    eta: Parameter = SYMBOLIC
    background: BackgroundDescriptor = MINKOWSKI
    potential_sign: str = "consistent"
    adiabatic_cutoff: bool = True
    dimension: int = 4
    disabled_rules: Tuple[str, ...] = ()
    test_label: str = "h"

    def __post_init__(self) -> None:
        if self.interaction is not None and self.interaction not in SUPPORTED_POWERS:
            raise ValueError(f"Interaction power must be None or one of {SUPPORTED_POWERS}, got {self.interaction!r}")
        if self.potential_sign not in POTENTIAL_SIGNS:
            raise ValueError(f"Unknown potential sign {self.potential_sign!r}")
        object.__setattr__(self, "xi", parse_parameter(self.xi))
        object.__setattr__(self, "eta", parse_parameter(self.eta))
        object.__setattr__(self, "disabled_rules", tuple(self.disabled_rules))

    @classmethod
    def from_config(cls, config: Config, **overrides: Any) -> "SETSpec":
        physics = config.physics
        values: Dict[str, Any] = {
            "interaction": physics.interaction,
            "xi": physics.xi,
            "eta": physics.eta,
            "background": parse_background(physics.background, physics.convention),
            "potential_sign": physics.potential_sign,
            "adiabatic_cutoff": physics.adiabatic_cutoff,
            "dimension": config.engine.dimension,
            "disabled_rules": tuple(config.rules.disabled),
        }
        values.update(overrides)
        return cls(**values)

    @property
    def xi_value(self) -> sympy.Expr:
        return XI if self.xi == SYMBOLIC else self.xi

    @property
    def eta_value(self) -> sympy.Expr:
        return ETA if self.eta == SYMBOLIC else self.eta

    @property
    def eta_symbolic(self) -> bool:
        return self.eta == SYMBOLIC

    @property
    def interaction_spec(self) -> Optional[InteractionSpec]:
        if self.interaction is None:
            return None
        return InteractionSpec(self.interaction, self.test_label)

    @property
    def sign(self) -> int:
        return POTENTIAL_SIGNS[self.potential_sign]

    def substitutions(self) -> Dict[sympy.Symbol, sympy.Expr]:
        """Numeric ξ and η to substitute into expressions built symbolically."""

        mapping: Dict[sympy.Symbol, sympy.Expr] = {}
        if self.xi != SYMBOLIC:
            mapping[XI] = self.xi
        if self.eta != SYMBOLIC:
            mapping[ETA] = self.eta
        return mapping

    def symbolic(self) -> "SETSpec":
        return replace(self, xi=SYMBOLIC, eta=SYMBOLIC)

    def describe(self) -> Dict[str, Any]:
        return {
            "interaction": self.interaction,
            "xi": sympy.sstr(self.xi) if self.xi != SYMBOLIC else SYMBOLIC,
            "eta": sympy.sstr(self.eta) if self.eta != SYMBOLIC else SYMBOLIC,
            "background": self.background.regime.value,
            "convention": self.background.convention.value,
            "potential_sign": self.potential_sign,
            "adiabatic_cutoff": self.adiabatic_cutoff,
            "dimension": self.dimension,
            "disabled_rules": list(self.disabled_rules),
        }
