"""Tests for the S-matrix, the Bogoliubov map and interacting expectation values."""

from __future__ import annotations

from math import factorial

import pytest
import sympy

from paqft_engine.deformation.products import star
from paqft_engine.expr.coeff import CoeffElem
from paqft_engine.expr.errors import StructuralError
from paqft_engine.expr.expression import SymExpr, equal
from paqft_engine.expr.factors import Field, Kernel, KernelKind, TestFn
from paqft_engine.expr.monomial import Monomial, Point
from paqft_engine.functional.builders import constant, identity, smeared_field, smeared_power
from paqft_engine.functional.core import Functional, vacuum_eval
from paqft_engine.perturbation import (
    InteractionSpec,
    bogoliubov,
    interacting_vev,
    smatrix,
    smatrix_inverse,
    unitarity_defect,
)
from paqft_engine.rewrite import UNITARITY, apply_rules


@pytest.fixture(params=[3, 4])
def interaction(request) -> InteractionSpec:
    return InteractionSpec(request.param)


def make_squared_field_term(coeff, n: int, between: KernelKind, left: KernelKind, right: KernelKind) -> Monomial:
    points = frozenset({Point("x", "h"), Point("y", "h"), Point("z", "f")})
    factors = (
        Kernel(between, "x", "y", exponent=n - 1),
        Kernel(left, "x", "z"),
        Kernel(right, "y", "z"),
        TestFn("h", "x"),
        TestFn("h", "y"),
        TestFn("f", "z"),
    )
    return Monomial(CoeffElem.of(coeff), factors, points, lam=2, hbar=n - 1)


def transcribed_expansion(F: Functional, V: InteractionSpec) -> Functional:
    """F + (iλ/ℏ)(V⋆_F F − V⋆_H F) − (λ²/2ℏ²)[(V⋆_AF V)⋆_H F + (V⋆_F V)⋆_F F − 2V⋆_H(V⋆_F F)]."""

    v = V.potential()
    first = star(v, F, KernelKind.HF) - star(v, F, KernelKind.H)
    second = (
        star(star(v, v, KernelKind.HAF), F, KernelKind.H)
        + star(star(v, v, KernelKind.HF), F, KernelKind.HF)
        - star(v, star(v, F, KernelKind.HF), KernelKind.H).scaled(2)
    )
    return F + first.scaled(sympy.I, lam=1, hbar=-1) + second.scaled(sympy.Rational(-1, 2), lam=2, hbar=-2)


def squared_field_formula(n: int) -> SymExpr:
    """λ²ℏ^{n-1}/(n-1)! [2H^{n-1}H H_F - H_F^{n-1}H_F H_F - H_AF^{n-1}H H]."""

    prefactor = sympy.Rational(1, factorial(n - 1))
    return SymExpr.build(
        [
            make_squared_field_term(2 * prefactor, n, KernelKind.H, KernelKind.H, KernelKind.HF),
            make_squared_field_term(-prefactor, n, KernelKind.HF, KernelKind.HF, KernelKind.HF),
            make_squared_field_term(-prefactor, n, KernelKind.HAF, KernelKind.H, KernelKind.H),
        ]
    )


def test_interaction_power_is_checked() -> None:
    with pytest.raises(StructuralError):
        InteractionSpec(5)


def test_interacting_field_vanishes_through_second_order(interaction: InteractionSpec) -> None:
    assert interacting_vev(smeared_field(), interaction, 2).is_zero


def test_squared_field_matches_closed_formula(interaction: InteractionSpec) -> None:
    vev = interacting_vev(smeared_power(2), interaction, 2)
    assert equal(vev, squared_field_formula(interaction.power))


def test_order_zero_bogoliubov_is_identity_map() -> None:
    F = smeared_power(2)
    assert bogoliubov(F, InteractionSpec(4), 0).body == F.with_truncation(0).body


def test_smatrix_second_order_hbar_powers() -> None:
    second = smatrix(InteractionSpec(4), 2).body.lambda_order(2)
    assert {monomial.hbar for monomial in second} == {-2, -1, 0, 1, 2}
    kinds = {
        factor.kind for monomial in second for factor in monomial.factors if isinstance(factor, Kernel)
    }
    assert kinds == {KernelKind.HF}


def test_inverse_uses_anti_feynman_kernel() -> None:
    second = smatrix_inverse(InteractionSpec(3), 2).body.lambda_order(2)
    kinds = {
        factor.kind for monomial in second for factor in monomial.factors if isinstance(factor, Kernel)
    }
    assert kinds == {KernelKind.HAF}


def test_first_order_smatrix_is_the_potential() -> None:
    V = InteractionSpec(3)
    first = smatrix(V, 1).body.lambda_order(1)
    (monomial,) = first.monomials
    assert monomial.hbar == -1
    assert monomial.coeff == CoeffElem.of(sympy.I * sympy.Rational(-1, 6))
    assert Field(monomial.integrated_points()[0].label, (), 3) in monomial.factors


def test_unitarity_defect_vanishes_after_kernel_relations(interaction: InteractionSpec) -> None:
    defect = unitarity_defect(interaction, 2)
    assert not defect.body.is_zero
    assert apply_rules(defect.body, UNITARITY).is_zero


def test_negative_order_rejected() -> None:
    with pytest.raises(ValueError):
        smatrix(InteractionSpec(4), -1)


@pytest.mark.parametrize("F", [smeared_field(), smeared_power(2)], ids=["field", "squared"])
def test_bogoliubov_matches_written_out_expansion(F: Functional, interaction: InteractionSpec) -> None:
    assert equal(bogoliubov(F, interaction, 2).body, transcribed_expansion(F, interaction).body)


def test_identity_has_unit_expectation_value(interaction: InteractionSpec) -> None:
    assert equal(interacting_vev(identity(), interaction, 2), SymExpr.scalar(1))
    assert equal(bogoliubov(constant(3), interaction, 2).body, SymExpr.scalar(3))


def test_unreduced_identity_expectation_needs_kernel_relations(interaction: InteractionSpec) -> None:
    raw = vacuum_eval(star(smatrix_inverse(interaction, 2), smatrix(interaction, 2), KernelKind.H, vacuum_only=True))
    assert not equal(raw, SymExpr.scalar(1))
    assert equal(apply_rules(raw, UNITARITY), SymExpr.scalar(1))
