"""The Hadamard coefficient v₁ at coinciding points for conformal coupling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import sympy

from ..expr.coeff import M2
from ..rewrite.background import BackgroundDescriptor, Regime
from ..utils.rational_utils import to_rational


WEYL_SQUARED = sympy.Symbol("C2")
RICCI_SQUARED = sympy.Symbol("Ric2")
RICCI_SCALAR = sympy.Symbol("R")
BOX_RICCI_SCALAR = sympy.Symbol("BoxR")

CURVATURE_SYMBOLS = (WEYL_SQUARED, RICCI_SQUARED, RICCI_SCALAR, BOX_RICCI_SCALAR)
CONFORMAL_XI = sympy.Rational(1, 6)


@dataclass(frozen=True)
class V1Formula:
    expr: sympy.Expr

    def curvature_coefficients(self) -> Dict[str, sympy.Expr]:
        """Coefficients of C², Ric², R² and □R."""

        poly = sympy.Poly(self.expr, *CURVATURE_SYMBOLS)
        return {
            "C2": poly.coeff_monomial(WEYL_SQUARED),
            "Ric2": poly.coeff_monomial(RICCI_SQUARED),
            "R2": poly.coeff_monomial(RICCI_SCALAR**2),
            "BoxR": poly.coeff_monomial(BOX_RICCI_SCALAR),
        }

    def constant_term(self) -> sympy.Expr:
        return self.expr.subs({symbol: 0 for symbol in CURVATURE_SYMBOLS})


def v1_formula() -> V1Formula:
    """m⁴/8 + (1/720)[C_{abcd}C^{abcd} + R_{ab}R^{ab} - R²/3 + □R]."""

    curvature = WEYL_SQUARED + RICCI_SQUARED - RICCI_SCALAR**2 / 3 + BOX_RICCI_SCALAR
    return V1Formula(M2**2 / 8 + curvature / 720)


def v1_eval(background: BackgroundDescriptor, xi=CONFORMAL_XI, dimension: int = 4) -> sympy.Expr:
    """v₁(z, z) on the given background; only the conformal coupling ξ = 1/6 is tabulated."""

    if to_rational(xi) != CONFORMAL_XI:
        raise ValueError(f"v1 is tabulated for xi = 1/6 only, got {xi!r}")
    formula = v1_formula().expr
    if background.regime is Regime.MINKOWSKI:
        return sympy.expand(formula.subs({symbol: 0 for symbol in CURVATURE_SYMBOLS}))
    if background.regime is Regime.MAXIMALLY_SYMMETRIC:
        constant = {WEYL_SQUARED: 0, BOX_RICCI_SCALAR: 0, RICCI_SQUARED: RICCI_SCALAR**2 / dimension}
        return sympy.expand(formula.subs(constant))
    return sympy.expand(formula)
