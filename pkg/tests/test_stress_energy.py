"""Tests for the stress-energy functional, conservation and trace pipelines."""

from __future__ import annotations

from dataclasses import replace
from typing import Dict, List, Mapping

import pytest
import sympy

from paqft_engine.expr.canonical import KERNEL_SYMMETRY
from paqft_engine.expr.coeff import ETA, M2, PI, CoeffElem
from paqft_engine.expr.expression import SymExpr, equal, mul_scalar, negate
from paqft_engine.expr.factors import Field, Geom, Index, Kernel, KernelKind
from paqft_engine.expr.monomial import Monomial, Point
from paqft_engine.functional.builders import local_density
from paqft_engine.functional.core import Functional
from paqft_engine.perturbation.smatrix import interacting_vev
from paqft_engine.rewrite import GENERIC, MINKOWSKI, parse_background
from paqft_engine.stress_energy import (
    EtaSolveError,
    SETSpec,
    SplittingTemplate,
    ambiguity_tensor,
    build_set,
    check_conservation,
    classical_divergence,
    classical_trace,
    divergence_order2,
    solve_eta,
    splitting_formula,
    splitting_template,
    trace_cubic,
    trace_order2,
)
from paqft_engine.stress_energy.build import free_terms
from paqft_engine.stress_energy.closed_forms import squared_field_expectation
from paqft_engine.stress_energy.targets import (
    classical_trace_target,
    compare,
    cubic_trace_target,
    free_trace_target,
    quartic_trace_target,
)


SIXTH = sympy.Rational(1, 6)


@pytest.fixture(scope="module")
def quartic_residual() -> SymExpr:
    return divergence_order2(SETSpec(4))


@pytest.fixture(scope="module")
def quartic_trace_spec() -> SETSpec:
    return SETSpec(4, xi=SIXTH, eta=sympy.Rational(1, 4))


@pytest.fixture(scope="module")
def quartic_trace(quartic_trace_spec: SETSpec) -> SymExpr:
    return trace_order2(quartic_trace_spec)


def make_scalar_at_z(coeff, *factors, hbar: int = 1) -> Monomial:
    return Monomial(CoeffElem.of(coeff), factors, frozenset({Point("z")}), hbar=hbar)


def relabel_kernels(expr: SymExpr, mapping: Mapping[KernelKind, KernelKind]) -> SymExpr:
    relabeled = []
    for monomial in expr:
        factors = tuple(
            replace(factor, kind=mapping.get(factor.kind, factor.kind)) if isinstance(factor, Kernel) else factor
            for factor in monomial.factors
        )
        relabeled.append(replace(monomial, factors=factors))
    return SymExpr.build(relabeled, expr.truncation, KERNEL_SYMMETRY)


def split_by_bridge(expr: SymExpr) -> Dict[KernelKind, SymExpr]:
    """Group monomials by the kernel joining the two interaction vertices, with that kernel removed."""

    pieces: Dict[KernelKind, List[Monomial]] = {}
    for monomial in expr:
        (bridge,) = [
            factor
            for factor in monomial.factors
            if isinstance(factor, Kernel)
            and monomial.point(factor.first).integrated
            and monomial.point(factor.second).integrated
        ]
        rest = tuple(factor for factor in monomial.factors if factor is not bridge)
        pieces.setdefault(bridge.kind, []).append(replace(monomial, factors=rest))
    return {kind: SymExpr.build(monomials, expr.truncation, KERNEL_SYMMETRY) for kind, monomials in pieces.items()}


def test_set_has_two_free_indices() -> None:
    T = build_set(SETSpec(3))
    assert all(monomial.free_indices() == ("mu", "nu") for monomial in T.monomials)
    assert {monomial.lam for monomial in T.monomials} == {0, 1}
    assert all(monomial.lam == 0 for monomial in build_set(SETSpec(None)).monomials)


def test_spec_rejects_unknown_values() -> None:
    with pytest.raises(ValueError):
        SETSpec(5)
    with pytest.raises(ValueError):
        SETSpec(4, potential_sign="flipped")
    with pytest.raises(ValueError):
        SETSpec(4, eta="a quarter")


@pytest.mark.parametrize("power, expected", [(4, sympy.Rational(1, 4)), (3, sympy.Rational(1, 3))])
def test_conservation_fixes_eta(power: int, expected) -> None:
    assert solve_eta(SETSpec(power)) == expected


def test_residual_vanishes_only_at_the_solution(quartic_residual: SymExpr) -> None:
    assert not quartic_residual.is_zero
    assert divergence_order2(SETSpec(4, eta=sympy.Rational(1, 4))).is_zero
    for eta in ("7/20", "3/20"):
        assert not divergence_order2(SETSpec(4, eta=eta)).is_zero


def test_check_conservation_reports_solution() -> None:
    check = check_conservation(SETSpec(3))
    assert check.eta_solution == sympy.Rational(1, 3)
    assert check.residual_at_solution is not None and check.residual_at_solution.is_zero
    assert check.conserved


def test_i_delta_convention_leaves_eta_free() -> None:
    spec = SETSpec(4, background=parse_background("minkowski", "i-delta"))
    check = check_conservation(spec)
    assert check.eta_solution is None
    assert "not unique" in check.note
    assert check.conserved
    with pytest.raises(EtaSolveError):
        solve_eta(spec)


def test_solve_eta_needs_symbolic_eta() -> None:
    with pytest.raises(EtaSolveError):
        solve_eta(SETSpec(4, eta="1/4"))


def test_free_field_on_a_generic_background_needs_a_third() -> None:
    assert solve_eta(SETSpec(None, background=GENERIC)) == sympy.Rational(1, 3)


def test_quartic_orders_disagree_on_a_generic_background() -> None:
    spec = SETSpec(4, background=GENERIC)
    orders = divergence_order2(spec).by_lambda()
    third, quarter = sympy.Rational(1, 3), sympy.Rational(1, 4)
    free, second = list(orders[0]), list(orders[2])
    assert free and second
    for monomial in free:
        coefficient = monomial.coeff.value
        assert sympy.simplify(coefficient.subs(ETA, third)) == 0
        assert sympy.simplify(coefficient.subs(ETA, 0) * 4 * PI**2) != 0
    assert all(sympy.simplify(monomial.coeff.value.subs(ETA, quarter)) == 0 for monomial in second)
    assert any(sympy.simplify(monomial.coeff.value.subs(ETA, third)) != 0 for monomial in second)
    with pytest.raises(EtaSolveError):
        solve_eta(spec)


def test_quartic_trace_matches_target(quartic_trace_spec: SETSpec, quartic_trace: SymExpr) -> None:
    comparison = compare(quartic_trace, quartic_trace_target(quartic_trace_spec))
    assert comparison.matches
    assert comparison.discrepancies() == []


def test_quartic_trace_vanishes_for_massless_field(quartic_trace: SymExpr) -> None:
    assert quartic_trace.subs({M2: 0}).is_zero


def test_cubic_trace_differs_from_printed_target() -> None:
    spec = SETSpec(3, xi=SIXTH, eta=sympy.Rational(1, 3))
    comparison = compare(trace_cubic(), cubic_trace_target(spec))
    assert not comparison.matches
    assert comparison.discrepancies()
    assert equal(comparison.difference.lambda_order(0), SymExpr.build(squared_field_expectation(-M2)))
    assert not comparison.difference.lambda_order(2).is_zero


def test_trace_cubic_requires_cubic_interaction() -> None:
    with pytest.raises(ValueError):
        trace_cubic(SETSpec(4))


def test_free_trace() -> None:
    spec = SETSpec(None, xi=SIXTH, eta=sympy.Rational(1, 3))
    derived = trace_order2(spec)
    assert compare(derived, free_trace_target(spec)).matches
    expected = SymExpr.build(squared_field_expectation(-M2) + [make_scalar_at_z(M2**2 / (32 * PI**2))])
    assert equal(derived, expected)


def test_classical_divergence_vanishes_on_shell() -> None:
    assert classical_divergence(SETSpec(4)).is_zero
    assert classical_divergence(SETSpec(3, eta="1/3")).is_zero
    assert not classical_divergence(SETSpec(4, potential_sign="printed")).is_zero


@pytest.mark.parametrize("power", [None, 3, 4])
def test_classical_trace_matches_target(power) -> None:
    spec = SETSpec(power)
    assert compare(classical_trace(spec), classical_trace_target(spec)).matches


def test_ambiguity_tensor_on_minkowski() -> None:
    result = ambiguity_tensor(MINKOWSKI)
    metric = Geom("metric", (Index("mu"), Index("nu")), "z")
    assert equal(result.tensor, SymExpr.build([make_scalar_at_z(M2**2 / (8 * PI**2), metric, hbar=0)]))
    assert equal(result.trace, SymExpr.build([make_scalar_at_z(M2**2 / (2 * PI**2), hbar=0)]))


def test_splitting_formula_reproduces_second_order_vev() -> None:
    spec = SETSpec(4)
    free_part = Functional.of(free_terms(spec), 2)
    vev = interacting_vev(free_part, spec.interaction_spec, 2).lambda_order(2)
    assert equal(splitting_formula(spec), vev)
    assert splitting_formula(SETSpec(None)).is_zero


def test_second_order_pieces_differ_only_in_kernel_kinds() -> None:
    spec = SETSpec(4)
    vev = interacting_vev(Functional.of(free_terms(spec), 2), spec.interaction_spec, 2).lambda_order(2)
    pieces = split_by_bridge(vev)
    assert set(pieces) == {KernelKind.H, KernelKind.HF, KernelKind.HAF}
    mixed = mul_scalar(sympy.Rational(1, 2), pieces[KernelKind.H])
    assert equal(relabel_kernels(mixed, {KernelKind.H: KernelKind.HF}), negate(pieces[KernelKind.HF]))
    assert equal(relabel_kernels(mixed, {KernelKind.HF: KernelKind.H}), negate(pieces[KernelKind.HAF]))


def test_template_needs_quadratic_monomials() -> None:
    assert len(splitting_template(SETSpec(4)).monomials) == len(free_terms(SETSpec(4)))
    cubic = SplittingTemplate((local_density("z", [Field("z", (), 3)]),))
    with pytest.raises(ValueError):
        cubic.instantiate(KernelKind.HF, KernelKind.HF)
