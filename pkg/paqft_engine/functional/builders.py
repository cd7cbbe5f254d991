"""Builders for the generator functionals: identity, smeared powers, derivative-decorated quadratics."""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

from ..expr.calculus import apply_chain
from ..expr.coeff import ONE, CoeffElem, Scalar
from ..expr.errors import StructuralError
from ..expr.expression import DEFAULT_TRUNCATION
from ..expr.factors import Chain, Factor, Field, TestFn
from ..expr.monomial import Monomial, Point
from .core import Functional


def identity(truncation: int = DEFAULT_TRUNCATION) -> Functional:
    return Functional.of([Monomial(coeff=ONE)], truncation)


def constant(value: Scalar, truncation: int = DEFAULT_TRUNCATION) -> Functional:
    return Functional.of([Monomial(coeff=CoeffElem.of(value))], truncation)


def smeared_power(
    power: int,
    label: str = "f",
    point: str = "x",
    coeff: Scalar = 1,
    truncation: int = DEFAULT_TRUNCATION,
) -> Functional:
    """Φ^k_f = ∫ φ^k(x) f(x)."""

    if power < 1:
        raise StructuralError("Smeared powers start at k = 1; use identity() for k = 0")
    monomial = Monomial(
        coeff=CoeffElem.of(coeff),
        factors=(Field(point, (), power), TestFn(label, point)),
        points=frozenset({Point(point, label)}),
    )
    return Functional.of([monomial], truncation)


def smeared_field(label: str = "f", point: str = "x", truncation: int = DEFAULT_TRUNCATION) -> Functional:
    return smeared_power(1, label, point, truncation=truncation)


def derivative_quadratic(
    first: Chain,
    second: Chain,
    label: str = "f",
    point: str = "x",
    coefficients: Sequence[Factor] = (),
    truncation: int = DEFAULT_TRUNCATION,
) -> Functional:
    """∫ f(x) (Dφ)(x) (D'φ)(x) with D, D' given as derivative chains and optional smooth coefficients."""

    factors = (Field(point, tuple(first)), Field(point, tuple(second))) + tuple(coefficients) + (TestFn(label, point),)
    monomial = Monomial(coeff=ONE, factors=factors, points=frozenset({Point(point, label)}))
    return Functional.of([monomial], truncation)


def local_density(
    point: str,
    factors: Iterable[Factor],
    coeff: Scalar = 1,
    lam: int = 0,
    extra_points: Iterable[Point] = (),
) -> Monomial:
    """Integral-kernel monomial at a free observation point."""

    return Monomial(
        coeff=CoeffElem.of(coeff),
        factors=tuple(factors),
        points=frozenset({Point(point)} | set(extra_points)),
        lam=lam,
    )


def differentiated_power(
    point: str,
    power: int,
    chain: Chain,
    coeff: Scalar = 1,
    lam: int = 0,
    cofactors: Sequence[Factor] = (),
    test_label: Optional[str] = None,
) -> List[Monomial]:
    """Leibniz expansion of (∇…∇ φ^k)(point), multiplied by smooth co-factors."""

    terms = apply_chain([(CoeffElem.of(coeff), (Field(point, (), power),))], point, tuple(chain))
    binding = Point(point, test_label)
    tail = tuple(cofactors) + ((TestFn(test_label, point),) if test_label else ())
    return [
        Monomial(coeff=weight, factors=factors + tail, points=frozenset({binding}), lam=lam)
        for weight, factors in terms
    ]
