"""Tests for scaling degrees, extension classes and the Hadamard coefficient v1."""

from __future__ import annotations

import pytest
import sympy

from paqft_engine.expr.coeff import M2
from paqft_engine.microlocal import (
    DistDescriptor,
    Extension,
    classify_extension,
    degree_of_divergence,
    delta_at_point,
    feynman_power,
    scaling_degree,
    scaling_table,
    v1_eval,
    v1_formula,
)
from paqft_engine.microlocal.hadamard import RICCI_SCALAR
from paqft_engine.rewrite import GENERIC, MAXIMALLY_SYMMETRIC, MINKOWSKI


def test_feynman_powers_in_four_dimensions() -> None:
    rows = scaling_table(4, (1, 2, 3, 4))
    assert [row.scaling_degree for row in rows] == [2, 4, 6, 8]
    assert [row.degree_of_divergence for row in rows] == [-2, 0, 2, 4]
    assert [row.opposite_sign_value for row in rows] == [2, 0, -2, -4]
    assert [row.classification for row in rows] == [Extension.UNIQUE] + [Extension.AMBIGUOUS] * 3
    assert [row.family_size for row in rows] == [0, 1, 3, 5]


def test_delta_scaling_degree_is_the_codimension() -> None:
    assert scaling_degree(delta_at_point(4)) == 4
    assert scaling_degree(delta_at_point(4, 2)) == 6
    assert degree_of_divergence(delta_at_point(4, 2)) == 2


def test_two_dimensional_powers_are_logarithmic() -> None:
    desc = feynman_power(3, 2)
    assert desc.log_power == 3
    assert scaling_degree(desc) == 0
    assert classify_extension(desc).kind is Extension.UNIQUE


def test_ambiguity_counts_delta_derivatives() -> None:
    result = classify_extension(feynman_power(3, 4))
    assert result.family_size == 3
    assert result.free_parameters == int(sympy.binomial(6, 4))


def test_infinite_descriptor_has_no_scaling_degree() -> None:
    desc = DistDescriptor(4, 4, infinite=True)
    assert scaling_degree(desc) is None
    assert classify_extension(desc).kind is Extension.NO_FINITE_SD


@pytest.mark.parametrize(
    "kwargs",
    [
        {"dimension": 1, "codimension": 1, "delta_order": 0},
        {"dimension": 4, "codimension": 0, "delta_order": 0},
        {"dimension": 4, "codimension": 4},
        {"dimension": 4, "codimension": 4, "sigma_power": 1, "delta_order": 0},
        {"dimension": 4, "codimension": 4, "delta_order": -1},
    ],
)
def test_malformed_descriptors_rejected(kwargs) -> None:
    with pytest.raises(ValueError):
        DistDescriptor(**kwargs)


def test_feynman_power_needs_positive_k() -> None:
    with pytest.raises(ValueError):
        feynman_power(0)


def test_v1_formula_coefficients() -> None:
    formula = v1_formula()
    coefficients = formula.curvature_coefficients()
    assert coefficients["C2"] == sympy.Rational(1, 720)
    assert coefficients["R2"] == sympy.Rational(-1, 2160)
    assert formula.constant_term() == M2**2 / 8


def test_v1_on_each_background() -> None:
    assert v1_eval(MINKOWSKI) == M2**2 / 8
    assert v1_eval(MAXIMALLY_SYMMETRIC) == sympy.expand(M2**2 / 8 - RICCI_SCALAR**2 / 8640)
    assert v1_eval(GENERIC, "1/6") == sympy.expand(v1_formula().expr)


def test_v1_rejects_non_conformal_coupling() -> None:
    with pytest.raises(ValueError):
        v1_eval(MINKOWSKI, "1/4")
