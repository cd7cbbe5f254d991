"""The improved stress-energy functional T^η_{μν}(z)."""

from __future__ import annotations

from math import factorial
from typing import List

import sympy

from ..expr.coeff import M2
from ..expr.expression import DEFAULT_TRUNCATION
from ..expr.factors import P0, Field, Geom, Index
from ..expr.monomial import Monomial
from ..functional.builders import differentiated_power, local_density
from ..functional.core import Functional
from .spec import SETSpec


SET_POINT = "z"
MU = "mu"
NU = "nu"
RHO = "rho"


def _metric(point: str = SET_POINT) -> Geom:
    return Geom("metric", (Index(MU), Index(NU)), point)


def free_terms(spec: SETSpec, point: str = SET_POINT) -> List[Monomial]:
    """λ⁰ part: minimal coupling, ξ-improvement and the on-shell vanishing η-term."""

    xi, eta = spec.xi_value, spec.eta_value
    half = sympy.Rational(1, 2)
    g = _metric(point)
    terms = [
        local_density(point, [Field(point, (Index(MU),)), Field(point, (Index(NU),))]),
        local_density(point, [g, Field(point, (Index(RHO, True),)), Field(point, (Index(RHO),))], -half),
        local_density(point, [g, Field(point, (), 2)], -half * M2),
        local_density(point, [Geom("einstein", (Index(MU), Index(NU)), point), Field(point, (), 2)], xi),
        local_density(point, [g, Field(point), Field(point, (P0,))], eta),
    ]
    terms += differentiated_power(point, 2, (Index(RHO), Index(RHO, True)), xi, cofactors=[g])
    terms += differentiated_power(point, 2, (Index(NU), Index(MU)), -xi)
    return terms


def interaction_terms(spec: SETSpec, point: str = SET_POINT) -> List[Monomial]:
    """λ¹ part: the potential term and the η-improvement's -λφⁿ/(n-1)! piece."""

    if spec.interaction is None:
        return []
    n = spec.interaction
    coeff = sympy.Rational(spec.sign, factorial(n)) - spec.eta_value / factorial(n - 1)
    return [local_density(point, [_metric(point), Field(point, (), n)], coeff, lam=1)]


def build_set(spec: SETSpec, truncation: int = DEFAULT_TRUNCATION) -> Functional:
    """T^η_{μν}(z) with free indices μ, ν at the free point z."""

    return Functional.of(free_terms(spec) + interaction_terms(spec), truncation)
