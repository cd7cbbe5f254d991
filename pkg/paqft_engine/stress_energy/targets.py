"""Reference trace results and their structural comparison with derived expressions."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import List

import sympy

from ..expr.coeff import M2, PI, CoeffElem
from ..expr.expression import SymExpr, add, mul_scalar, negate
from ..expr.factors import Field, Geom, Index, Kernel, KernelKind, TestFn
from ..expr.latex import monomial_tex
from ..expr.monomial import Monomial, Point
from ..functional.builders import differentiated_power, local_density
from ..functional.core import Functional
from ..perturbation.interaction import InteractionSpec
from ..perturbation.smatrix import interacting_vev
from ..rewrite.engine import apply_rules
from .build import SET_POINT, build_set
from .closed_forms import squared_field_expectation
from .pipelines import PERTURBATIVE_ORDER, on_shell, rewrite_context, trace_rules
from .spec import SETSpec


def perturbative_squared_field(V: InteractionSpec, point: str = SET_POINT) -> SymExpr:
    """λ² part of ⟨R_{λV}(Φ²(point))⟩."""

    squared = Functional.of([local_density(point, [Field(point, (), 2)])], PERTURBATIVE_ORDER)
    return interacting_vev(squared, V, PERTURBATIVE_ORDER).lambda_order(2)


def _normalized(expr: SymExpr, spec: SETSpec) -> SymExpr:
    return apply_rules(expr, trace_rules(spec), spec.background, rewrite_context(spec))


def _expectation_squared(spec: SETSpec) -> SymExpr:
    """ℏW(z,z) + λ²-part of ⟨Φ²(z)⟩."""

    return add(SymExpr.build(squared_field_expectation()), perturbative_squared_field(spec.interaction_spec))


def _cubic_kernel_difference(spec: SETSpec) -> SymExpr:
    """(λ²ℏ²/6) ∫ [H³ - H_F³](y, z) h(y) h(z)."""

    label = spec.test_label
    points = frozenset({Point(SET_POINT), Point("y", label)})
    tests = (TestFn(label, "y"), TestFn(label, SET_POINT))
    sixth = sympy.Rational(1, 6)
    return SymExpr.build(
        [
            Monomial(CoeffElem.of(sign * sixth), (Kernel(kind, "y", SET_POINT, exponent=3),) + tests, points, 2, 2)
            for sign, kind in ((1, KernelKind.H), (-1, KernelKind.HF))
        ]
    )


def _anomaly(coeff: sympy.Expr = sympy.Integer(1)) -> SymExpr:
    """(ℏ/4π²) v₁(z)."""

    monomial = Monomial(
        CoeffElem.of(coeff / (4 * PI**2)), (Geom("v1", (), SET_POINT),), frozenset({Point(SET_POINT)}), 0, 1
    )
    return SymExpr.build([monomial])


def quartic_trace_target(spec: SETSpec) -> SymExpr:
    """-m²(R⁰ + R²)(Φ²) at φ = 0, with no anomaly term."""

    return _normalized(mul_scalar(-M2, _expectation_squared(spec)), spec)


def cubic_trace_target(spec: SETSpec) -> SymExpr:
    """(1/4π²)v₁ + (λ²ℏ²/6)∫[H³ - H_F³]hh - (5/3)m² R²(Φ²) at φ = 0, as transcribed."""

    squared = perturbative_squared_field(spec.interaction_spec)
    printed = add(add(_anomaly(), _cubic_kernel_difference(spec)), mul_scalar(sympy.Rational(-5, 3) * M2, squared))
    return _normalized(printed, spec)


def free_trace_target(spec: SETSpec) -> SymExpr:
    """-m²⟨:Φ²:⟩ + (1/4π²) v₁."""

    return _normalized(add(SymExpr.build(squared_field_expectation(-M2)), _anomaly()), spec)


def trace_target(spec: SETSpec) -> SymExpr:
    if spec.interaction is None:
        return free_trace_target(spec)
    if spec.interaction == 3:
        return cubic_trace_target(spec)
    return quartic_trace_target(spec)


def classical_trace_target(spec: SETSpec) -> SymExpr:
    """-m²φ² + ½(6ξ - 1)□φ² + λ(4s - n)/n! φⁿ on shell."""

    monomials = [local_density(SET_POINT, [Field(SET_POINT, (), 2)], -M2)]
    monomials += differentiated_power(SET_POINT, 2, (Index("rho"), Index("rho", True)), (6 * spec.xi_value - 1) / 2)
    if spec.interaction is not None:
        n = spec.interaction
        coeff = sympy.Rational(4 * spec.sign - n, factorial(n))
        monomials.append(local_density(SET_POINT, [Field(SET_POINT, (), n)], coeff, lam=1))
    return on_shell(SymExpr.build(monomials, build_set(spec).truncation), spec)


@dataclass(frozen=True)
class TargetComparison:
    derived: SymExpr
    target: SymExpr
    difference: SymExpr

    @property
    def matches(self) -> bool:
        return self.difference.is_zero

    def discrepancies(self) -> List[str]:
        return [monomial_tex(monomial) for monomial in self.difference]


def compare(derived: SymExpr, target: SymExpr) -> TargetComparison:
    """derived - target after a common canonicalization."""

    target = target.with_policy(derived.policy)
    difference = add(derived, negate(target))
    return TargetComparison(derived, target, difference)
