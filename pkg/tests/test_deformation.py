"""Tests for deformed products, Wick ordering and time-ordered products."""

from __future__ import annotations

from itertools import combinations, permutations
from math import factorial

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from paqft_engine.deformation.contraction import contraction_matrices, pattern_weight
from paqft_engine.deformation.products import star, time_ordered, wick_order
from paqft_engine.expr.coeff import CoeffElem
from paqft_engine.expr.expression import SymExpr
from paqft_engine.expr.factors import Field, Index, Kernel, KernelKind, TestFn
from paqft_engine.expr.monomial import Monomial, Point
from paqft_engine.functional.builders import constant, derivative_quadratic, smeared_power
from paqft_engine.functional.core import Functional, separate
from paqft_engine.perturbation.interaction import InteractionSpec


PROPERTY_SETTINGS = settings(max_examples=100, deadline=None)
INDEX_NAMES = ("a", "b", "c")


def make_polynomial(terms, label: str, point: str) -> Functional:
    total = constant(0)
    for power, coeff in terms:
        total = total + smeared_power(power, label, point, coeff)
    return total


def polynomials(label: str, point: str, max_power: int = 3):
    return st.lists(
        st.tuples(st.integers(min_value=1, max_value=max_power), st.integers(min_value=-3, max_value=3).filter(bool)),
        min_size=1,
        max_size=2,
    ).map(lambda terms: make_polynomial(terms, label, point))


chains = st.lists(
    st.tuples(st.sampled_from(INDEX_NAMES), st.booleans()), max_size=2, unique_by=lambda item: item[0]
).map(lambda items: tuple(Index(name, up) for name, up in items))


def test_squared_field_product_has_three_terms() -> None:
    product = star(smeared_power(2, "f", "x"), smeared_power(2, "g", "y"), KernelKind.H)
    by_hbar = {monomial.hbar: monomial.coeff for monomial in product.monomials}
    assert len(product.monomials) == 3
    assert by_hbar == {0: CoeffElem.of(1), 1: CoeffElem.of(4), 2: CoeffElem.of(2)}


def test_contraction_weights() -> None:
    matrices = list(contraction_matrices([2], [2]))
    weights = sorted(pattern_weight(matrix, [2], [2]) for matrix in matrices)
    assert weights == [1, 2, 4]
    assert list(contraction_matrices([1], [2], exhaustive=True)) == []


def test_wick_ordering_of_square() -> None:
    ordered = wick_order(smeared_power(2), -1)
    hbar_terms = [monomial for monomial in ordered.monomials if monomial.hbar == 1]
    (term,) = hbar_terms
    assert term.coeff == CoeffElem.of(-1)
    assert any(isinstance(factor, Kernel) and factor.kind is KernelKind.H for factor in term.factors)


def test_time_ordered_uses_feynman_kernel() -> None:
    product = time_ordered(smeared_power(1, "f", "x"), smeared_power(1, "g", "y"))
    kinds = {
        factor.kind for monomial in product.monomials for factor in monomial.factors if isinstance(factor, Kernel)
    }
    assert kinds == {KernelKind.HF}
    assert time_ordered().monomials == constant(1).monomials


def test_time_ordered_is_symmetric_in_its_arguments() -> None:
    arguments = (smeared_power(2, "f", "x"), smeared_power(2, "g", "y"), smeared_power(2, "k", "w"))
    bodies = [time_ordered(*ordering).body for ordering in permutations(arguments)]
    assert len(bodies) == 6
    assert all(body == bodies[0] for body in bodies)
    assert any(monomial.hbar == 3 for monomial in bodies[0].monomials)


def useful_product(V: InteractionSpec, F: Functional, kind: KernelKind) -> SymExpr:
    """V_h[φ]F_f[φ] minus the one- and two-contraction terms, written out by hand."""

    n = V.power
    (monomial,) = F.monomials
    fields = [factor for factor in monomial.factors if isinstance(factor, Field)]
    if len(fields) == 1:
        # identical undecorated factors merge into φ²
        d1 = d2 = Field(fields[0].point, fields[0].chain)
    else:
        d1, d2 = fields
    x, z = "y", d1.point
    points = frozenset({Point(x, V.test_label), Point(z, "f")})
    tests = (TestFn(V.test_label, x), TestFn("f", z))

    def K(field: Field) -> Kernel:
        return Kernel(kind, x, z, (), field.chain)

    def make(coeff, hbar, *factors) -> Monomial:
        return Monomial(CoeffElem.of(coeff), factors + tests, points, 0, hbar)

    terms = [
        make(sympy.Rational(-1, factorial(n)), 0, Field(x, (), n), d1, d2),
        make(sympy.Rational(-1, factorial(n - 1)), 1, K(d1), d2, Field(x, (), n - 1)),
        make(sympy.Rational(-1, factorial(n - 1)), 1, d1, K(d2), Field(x, (), n - 1)),
        make(sympy.Rational(-1, factorial(n - 2)), 2, K(d1), K(d2), *((Field(x, (), n - 2),) if n > 2 else ())),
    ]
    return SymExpr.build(terms)


def exponential_oracle(V: Functional, F: Functional, kind: KernelKind) -> SymExpr:
    """Expand exp(ℏ⟨K, δ⊗δ⟩) by summing over every partial matching of labelled field copies."""

    produced = []
    for outer in V.monomials:
        for inner in F.monomials:
            left, right = separate(outer, inner)
            left_copies = [factor for factor in left.factors if isinstance(factor, Field) for _ in range(factor.exponent)]
            right_copies = [factor for factor in right.factors if isinstance(factor, Field) for _ in range(factor.exponent)]
            left_copies = [Field(f.point, f.chain) for f in left_copies]
            right_copies = [Field(f.point, f.chain) for f in right_copies]
            left_rest = [f for f in left.factors if not isinstance(f, Field)]
            right_rest = [f for f in right.factors if not isinstance(f, Field)]
            for k in range(min(len(left_copies), len(right_copies)) + 1):
                for chosen_right in combinations(range(len(right_copies)), k):
                    for chosen_left in permutations(range(len(left_copies)), k):
                        kernels = [
                            Kernel(kind, left_copies[i].point, right_copies[j].point, left_copies[i].chain, right_copies[j].chain)
                            for i, j in zip(chosen_left, chosen_right)
                        ]
                        spare = [f for i, f in enumerate(left_copies) if i not in chosen_left]
                        spare += [f for j, f in enumerate(right_copies) if j not in chosen_right]
                        produced.append(
                            Monomial(
                                left.coeff * right.coeff,
                                tuple(left_rest + right_rest + spare + kernels),
                                left.points | right.points,
                                left.lam + right.lam,
                                left.hbar + right.hbar + k,
                            )
                        )
    return SymExpr.build(produced)


@settings(max_examples=30, deadline=None)
@given(chains, chains, st.sampled_from([3, 4]), st.sampled_from([KernelKind.H, KernelKind.HF]))
def test_useful_product_formula_and_oracle(first, second, power: int, kind: KernelKind) -> None:
    V = InteractionSpec(power)
    F = derivative_quadratic(first, second, point="z")
    product = star(V.potential(), F, kind).body
    assert product == useful_product(V, F, kind)
    assert product == exponential_oracle(V.potential(), F, kind)


@PROPERTY_SETTINGS
@given(polynomials("f", "x"), polynomials("g", "y"), polynomials("k", "w"))
def test_star_product_is_associative(A: Functional, B: Functional, C: Functional) -> None:
    left = star(star(A, B, KernelKind.H), C, KernelKind.H)
    right = star(A, star(B, C, KernelKind.H), KernelKind.H)
    assert left.body == right.body


@PROPERTY_SETTINGS
@given(polynomials("f", "x", max_power=4))
def test_wick_ordering_round_trip(F: Functional) -> None:
    assert wick_order(wick_order(F, 1), -1).body == F.body
    assert wick_order(wick_order(F, -1, KernelKind.W), 1, KernelKind.W).body == F.body
