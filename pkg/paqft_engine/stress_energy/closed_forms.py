"""λ⁰ contributions taken in closed form from the Hadamard expansion of the free field."""

from __future__ import annotations

from typing import List

import sympy

from ..expr.calculus import apply_chain
from ..expr.coeff import M2, PI, CoeffElem
from ..expr.expression import SymExpr
from ..expr.factors import Geom, Index, Kernel, KernelKind
from ..expr.monomial import Monomial, Point
from .build import NU, RHO, SET_POINT
from .spec import SETSpec


def _at_point(coeff: sympy.Expr, factors, hbar: int = 1) -> Monomial:
    return Monomial(coeff=CoeffElem.of(coeff), factors=tuple(factors), points=frozenset({Point(SET_POINT)}), hbar=hbar)


def squared_field_expectation(coeff: sympy.Expr = sympy.Integer(1)) -> List[Monomial]:
    """⟨:Φ²:⟩(z) = ℏW(z, z)."""

    return [_at_point(coeff, [Kernel(KernelKind.W, SET_POINT, SET_POINT)])]


def free_divergence(spec: SETSpec) -> SymExpr:
    """((1 - 3η)/4π²) ℏ ∂_ν v₁(z)."""

    coeff = (1 - 3 * spec.eta_value) / (4 * PI**2)
    return SymExpr.build([_at_point(coeff, [Geom("v1", (), SET_POINT, (Index(NU),))])])


def free_trace(spec: SETSpec) -> SymExpr:
    """-m²⟨:Φ²:⟩ + ½(6ξ - 1)□⟨:Φ²:⟩ + 3(4η - 1)/(4π²) ℏ v₁(z)."""

    xi, eta = spec.xi_value, spec.eta_value
    monomials = squared_field_expectation(-M2)
    box = apply_chain(
        [(CoeffElem.of((6 * xi - 1) / 2), (Kernel(KernelKind.W, SET_POINT, SET_POINT),))],
        SET_POINT,
        (Index(RHO), Index(RHO, True)),
    )
    monomials += [_at_point(weight.value, factors) for weight, factors in box]
    monomials.append(_at_point(3 * (4 * eta - 1) / (4 * PI**2), [Geom("v1", (), SET_POINT)]))
    return SymExpr.build(monomials)
