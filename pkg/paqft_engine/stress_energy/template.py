"""Polarized quadratic skeleton A_{μν}(K₁, K₂) and the second-order splitting formula."""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import factorial
from typing import List, Sequence, Tuple

import sympy

from ..expr.canonical import KERNEL_SYMMETRY
from ..expr.expression import SymExpr
from ..expr.factors import Chain, Factor, Field, Kernel, KernelKind, TestFn
from ..expr.monomial import Monomial, Point
from .build import SET_POINT, free_terms
from .spec import SETSpec


SOURCES = ("y1", "y2")


def _field_chains(monomial: Monomial) -> List[Chain]:
    chains: List[Chain] = []
    for factor in monomial.factors:
        if isinstance(factor, Field):
            chains.extend([factor.chain] * factor.exponent)
    return chains


@dataclass(frozen=True)
class SplittingTemplate:
    """Quadratic monomials of T with their two field slots open."""

    monomials: Tuple[Monomial, ...]
    test_label: str = "h"

    def instantiate(
        self,
        first: KernelKind,
        second: KernelKind,
        cofactors: Sequence[Factor] = (),
        coeff: sympy.Expr = sympy.Integer(1),
        lam: int = 0,
        hbar: int = 0,
    ) -> List[Monomial]:
        """A(K₁(y1, z), K₂(y2, z)) = ½ Σ over both slot assignments, times the co-factors."""

        left, right = SOURCES
        points = frozenset({Point(SET_POINT), Point(left, self.test_label), Point(right, self.test_label)})
        tests = (TestFn(self.test_label, left), TestFn(self.test_label, right))
        produced: List[Monomial] = []
        for monomial in self.monomials:
            chains = _field_chains(monomial)
            if len(chains) != 2:
                raise ValueError(f"Template monomials must be quadratic in the field: {monomial}")
            rest = tuple(factor for factor in monomial.factors if not isinstance(factor, Field))
            for a, b in (chains, chains[::-1]):
                kernels = (
                    Kernel(first, left, SET_POINT, (), a),
                    Kernel(second, right, SET_POINT, (), b),
                )
                produced.append(
                    replace(
                        monomial,
                        coeff=monomial.coeff * coeff * sympy.Rational(1, 2),
                        factors=rest + kernels + tuple(cofactors) + tests,
                        points=points,
                        lam=monomial.lam + lam,
                        hbar=monomial.hbar + hbar,
                    )
                )
        return produced


def splitting_template(spec: SETSpec) -> SplittingTemplate:
    return SplittingTemplate(tuple(free_terms(spec)), spec.test_label)


def splitting_formula(spec: SETSpec) -> SymExpr:
    """λ²ℏ^{n-1}/(n-1)! [2H^{n-1}A(H, H_F) - H_F^{n-1}A(H_F, H_F) - H_AF^{n-1}A(H, H)]."""

    if spec.interaction is None:
        return SymExpr.build((), policy=KERNEL_SYMMETRY)
    n = spec.interaction
    template = splitting_template(spec)
    prefactor = sympy.Rational(1, factorial(n - 1))
    left, right = SOURCES

    def bridge(kind: KernelKind) -> Tuple[Factor, ...]:
        return (Kernel(kind, left, right, exponent=n - 1),)

    pieces = [
        (2, KernelKind.H, KernelKind.H, KernelKind.HF),
        (-1, KernelKind.HF, KernelKind.HF, KernelKind.HF),
        (-1, KernelKind.HAF, KernelKind.H, KernelKind.H),
    ]
    produced: List[Monomial] = []
    for weight, between, first, second in pieces:
        produced += template.instantiate(first, second, bridge(between), weight * prefactor, lam=2, hbar=n - 1)
    return SymExpr.build(produced, policy=KERNEL_SYMMETRY)
