"""Tests for the expression layer: structure checks, canonical form and arithmetic."""

from __future__ import annotations

import json

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from paqft_engine.expr.calculus import collapse_delta, differentiate_monomial
from paqft_engine.expr.canonical import KERNEL_SYMMETRY
from paqft_engine.expr.coeff import M2, CoeffElem, I, ScalarSymbol, default_symbols
from paqft_engine.expr.errors import StructuralError
from paqft_engine.expr.expression import SymExpr, add, canonicalize, equal, mul_scalar, negate
from paqft_engine.expr.factors import P0, Field, Geom, Index, Kernel, KernelKind, TestFn
from paqft_engine.expr.latex import expr_tex, standalone_document
from paqft_engine.expr.monomial import Monomial, Point
from paqft_engine.expr.serialize import dumps, expr_to_dict


PROPERTY_SETTINGS = settings(max_examples=100, deadline=None)


def make_monomial(factors, points=("x", "y"), coeff=1, lam=0, hbar=0, integrated=()) -> Monomial:
    declared = {Point(label) for label in points} | {Point(label, test) for label, test in integrated}
    return Monomial(CoeffElem.of(coeff), tuple(factors), frozenset(declared), lam, hbar)


def smeared(label: str, point: str, *factors) -> Monomial:
    return make_monomial(factors + (TestFn(label, point),), points=(), integrated=((point, label),))


FACTOR_POOL = [
    Field("x"),
    Field("y"),
    Field("x", (), 2),
    Kernel(KernelKind.H, "x", "y"),
    Kernel(KernelKind.HF, "y", "x"),
    Kernel(KernelKind.DELTA, "x", "y"),
    Geom("ricci_scalar", (), "x"),
]

monomials = st.builds(
    lambda factors, coeff, lam, hbar: make_monomial(factors, coeff=coeff, lam=lam, hbar=hbar),
    st.lists(st.sampled_from(FACTOR_POOL), max_size=4),
    st.fractions(min_value=-5, max_value=5, max_denominator=6).map(lambda f: sympy.Rational(f.numerator, f.denominator)),
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=0, max_value=2),
)
expressions = st.lists(monomials, max_size=5).map(SymExpr.build)
scalars = st.integers(min_value=-4, max_value=4).map(sympy.Integer) | st.just(M2) | st.just(I)


def test_undeclared_point_rejected() -> None:
    with pytest.raises(StructuralError):
        Monomial(CoeffElem.of(1), (Field("x"),), frozenset())


def test_integrated_point_needs_its_test_function() -> None:
    with pytest.raises(StructuralError):
        Monomial(CoeffElem.of(1), (Field("u"),), frozenset({Point("u", "f")}))


def test_reserved_prefix_only_for_integrated_points() -> None:
    with pytest.raises(StructuralError):
        Point("#1")
    assert Point("#1", "f").integrated


def test_index_used_three_times_rejected() -> None:
    a = Index("a")
    with pytest.raises(StructuralError):
        make_monomial([Field("x", (a,)), Field("y", (a,)), Geom("metric", (a, Index("b")), "x")])


def test_float_coefficient_rejected() -> None:
    with pytest.raises(StructuralError):
        CoeffElem.of(0.5)


def test_symbol_table_keeps_names_unique() -> None:
    table = default_symbols()
    assert list(table.names()) == ["eta", "m2", "pi", "xi"]
    assert table.declare("xi", "coupling-parameter") == table["xi"]
    table.declare("R0", "curvature-constant")
    assert "R0" in table
    with pytest.raises(StructuralError):
        table.declare("m2", "coupling-parameter")
    with pytest.raises(StructuralError):
        ScalarSymbol("kappa", "tensor")


def test_geometric_arity_checked() -> None:
    with pytest.raises(StructuralError):
        Geom("ricci", (Index("a"),), "x")


def test_p0_must_be_innermost() -> None:
    with pytest.raises(StructuralError):
        Field("x", (Index("a"), P0))


def test_inverse_metric_is_metric_with_raised_indices() -> None:
    inverse = Geom("inverse_metric", (Index("a"), Index("b")), "x")
    assert inverse.tensor == "metric"
    assert all(index.up for index in inverse.tensor_indices)


def test_identical_factors_merge_into_a_power() -> None:
    expr = SymExpr.build([make_monomial([Field("x"), Field("x"), Field("y")])])
    (monomial,) = expr.monomials
    assert Field("x", (), 2) in monomial.factors


def test_integrated_point_names_do_not_matter() -> None:
    left = SymExpr.build([smeared("f", "u", Field("u", (), 2))])
    right = SymExpr.build([smeared("f", "w", Field("w", (), 2))])
    assert left == right
    assert add(left, right).monomials[0].coeff == CoeffElem.of(2)


def test_dummy_index_names_and_positions_do_not_matter() -> None:
    a, b = Index("a"), Index("b")
    left = make_monomial([Field("x", (a,)), Field("y", (a.flipped(),))])
    right = make_monomial([Field("y", (b,)), Field("x", (b.flipped(),))])
    assert equal(SymExpr.build([left]), SymExpr.build([right]))


def test_kernel_symmetry_policy() -> None:
    forward = make_monomial([Kernel(KernelKind.DELTA, "x", "y")])
    backward = make_monomial([Kernel(KernelKind.DELTA, "y", "x")])
    total = SymExpr.build([forward, backward], policy=KERNEL_SYMMETRY)
    assert total.is_zero
    assert len(SymExpr.build([forward, backward])) == 2

    feynman = SymExpr.build(
        [make_monomial([Kernel(KernelKind.HF, "x", "y")]), make_monomial([Kernel(KernelKind.HF, "y", "x")], coeff=-1)],
        policy=KERNEL_SYMMETRY,
    )
    assert feynman.is_zero


def test_antisymmetric_kernel_at_coincident_points_vanishes() -> None:
    expr = SymExpr.build([make_monomial([Kernel(KernelKind.DELTA, "x", "x")])], policy=KERNEL_SYMMETRY)
    assert expr.is_zero


def test_truncation_drops_high_orders_and_mismatch_raises() -> None:
    expr = SymExpr.build([make_monomial([Field("x")], lam=3), make_monomial([Field("x")], lam=1)], truncation=2)
    assert [m.lam for m in expr] == [1]
    with pytest.raises(StructuralError):
        add(expr, SymExpr.zero(truncation=3))


def test_by_lambda_and_subs() -> None:
    xi = sympy.Symbol("xi")
    expr = SymExpr.build([make_monomial([Field("x")], coeff=xi), make_monomial([Field("y")], lam=2)])
    assert set(expr.by_lambda()) == {0, 2}
    assert expr.subs({xi: 0}).lambda_order(0).is_zero


def test_derivative_of_power_and_metric_is_skipped() -> None:
    a = Index("a")
    monomial = make_monomial([Field("x", (), 3), Geom("metric", (Index("b"), Index("c")), "x")])
    (term,) = differentiate_monomial(monomial, "x", a)
    assert term.coeff == CoeffElem.of(3)
    assert Field("x", (), 2) in term.factors and Field("x", (a,)) in term.factors


def test_delta_collapse_moves_derivatives_by_parts() -> None:
    a = Index("a")
    monomial = make_monomial(
        [Kernel(KernelKind.DIRAC, "x", "u", (), (a,)), Field("u"), TestFn("f", "u")],
        points=("x",),
        integrated=(("u", "f"),),
    )
    collapsed = SymExpr.build(collapse_delta(monomial, 0))
    expected = SymExpr.build(
        [
            make_monomial([Field("x", (a,)), TestFn("f", "x")], points=("x",), coeff=-1),
            make_monomial([Field("x"), TestFn("f", "x", (a,))], points=("x",), coeff=-1),
        ]
    )
    assert collapsed == expected


def test_serialization_is_deterministic() -> None:
    expr = SymExpr.build([make_monomial([Kernel(KernelKind.H, "x", "y")], coeff=sympy.Rational(1, 3), hbar=1)])
    text = dumps(expr_to_dict(expr))
    assert text == dumps(expr_to_dict(SymExpr.build(list(reversed(expr.monomials)))))
    assert json.loads(text)["truncation"] == 2


def test_latex_rendering() -> None:
    expr = SymExpr.build([make_monomial([Field("x")], coeff=-1, lam=2, hbar=1)])
    assert r"\lambda^{2}" in expr_tex(expr)
    assert expr_tex(SymExpr.zero()) == "0"
    document = standalone_document([("Example", expr_tex(expr))])
    assert document.startswith(r"\documentclass") and document.rstrip().endswith(r"\end{document}")


@PROPERTY_SETTINGS
@given(expressions)
def test_canonicalize_is_idempotent(expr: SymExpr) -> None:
    once = canonicalize(expr, KERNEL_SYMMETRY)
    assert canonicalize(once, KERNEL_SYMMETRY) == once


@PROPERTY_SETTINGS
@given(expressions)
def test_expression_minus_itself_is_zero(expr: SymExpr) -> None:
    assert add(expr, negate(expr)).is_zero


@PROPERTY_SETTINGS
@given(scalars, expressions, expressions)
def test_scalar_multiplication_distributes(c, left: SymExpr, right: SymExpr) -> None:
    assert mul_scalar(c, add(left, right)) == add(mul_scalar(c, left), mul_scalar(c, right))
