"""Enumeration of contraction patterns between the field factors of two monomials.

A pattern is a non-negative integer matrix m_ij (left field slot i, right field slot j)
whose row and column sums stay within the field exponents. Its weight is

    Π_i e_i!/(e_i - r_i)! · Π_j e'_j!/(e'_j - c_j)! / Π_ij m_ij!

which is the 1/k! of the exponential series times the number of ways to pick the
derivatives, and each pattern carries ℏ^k with k = Σ m_ij.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, perm
from typing import Iterator, List, Sequence, Tuple

import sympy

from ..expr.coeff import CoeffElem
from ..expr.factors import Factor, Field, Kernel, KernelKind, with_exponent
from ..expr.monomial import Monomial


Matrix = Tuple[Tuple[int, ...], ...]


def field_slots(monomial: Monomial) -> List[Tuple[int, Field]]:
    return [(position, factor) for position, factor in enumerate(monomial.factors) if isinstance(factor, Field)]


def contraction_matrices(
    rows: Sequence[int], cols: Sequence[int], exhaustive: bool = False
) -> Iterator[Matrix]:
    """All matrices with row sums ≤ rows and column sums ≤ cols.

    With `exhaustive`, only matrices saturating every row and column are produced.
    """

    rows, cols = list(rows), list(cols)
    if exhaustive and sum(rows) != sum(cols):
        return
    n_rows, n_cols = len(rows), len(cols)
    cells = [[0] * n_cols for _ in range(n_rows)]
    col_left = list(cols)

    def fill(i: int, j: int, row_left: int) -> Iterator[Matrix]:
        if i == n_rows:
            if exhaustive and any(col_left):
                return
            yield tuple(tuple(row) for row in cells)
            return
        if j == n_cols:
            if exhaustive and row_left:
                return
            next_row = rows[i + 1] if i + 1 < n_rows else 0
            yield from fill(i + 1, 0, next_row)
            return
        upper = min(row_left, col_left[j])
        lower = 0
        if exhaustive and j == n_cols - 1:
            lower = row_left
            if lower > upper:
                return
        for value in range(lower, upper + 1):
            cells[i][j] = value
            col_left[j] -= value
            yield from fill(i, j + 1, row_left - value)
            col_left[j] += value
        cells[i][j] = 0

    yield from fill(0, 0, rows[0] if rows else 0)


def pattern_weight(matrix: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    weight = Fraction(1)
    for i, exponent in enumerate(rows):
        weight *= perm(exponent, sum(matrix[i]))
    for j, exponent in enumerate(cols):
        weight *= perm(exponent, sum(row[j] for row in matrix))
    for row in matrix:
        for value in row:
            weight /= factorial(value)
    return weight


def as_coeff(value: Fraction) -> CoeffElem:
    return CoeffElem.of(sympy.Rational(value.numerator, value.denominator))


def contract(left: Monomial, right: Monomial, kind: KernelKind, exhaustive: bool = False) -> List[Monomial]:
    """All contraction terms of left ⊗ right through kernel K(left point, right point).

    The two monomials must already share only free labels.
    """

    left_slots = field_slots(left)
    right_slots = field_slots(right)
    rows = [factor.exponent for _, factor in left_slots]
    cols = [factor.exponent for _, factor in right_slots]
    left_rest = [factor for factor in left.factors if not isinstance(factor, Field)]
    right_rest = [factor for factor in right.factors if not isinstance(factor, Field)]
    joined = left.times(right)

    if kind is KernelKind.ZERO:
        if exhaustive and (rows or cols):
            return []
        return [joined]

    produced: List[Monomial] = []
    for matrix in contraction_matrices(rows, cols, exhaustive):
        order = sum(sum(row) for row in matrix)
        kernels: List[Factor] = []
        for i, (_, field_left) in enumerate(left_slots):
            for j, (_, field_right) in enumerate(right_slots):
                count = matrix[i][j]
                if count:
                    kernels.append(
                        Kernel(kind, field_left.point, field_right.point, field_left.chain, field_right.chain, count)
                    )
        remaining: List[Factor] = []
        for i, (_, field) in enumerate(left_slots):
            left_over = field.exponent - sum(matrix[i])
            if left_over:
                remaining.append(with_exponent(field, left_over))
        for j, (_, field) in enumerate(right_slots):
            left_over = field.exponent - sum(row[j] for row in matrix)
            if left_over:
                remaining.append(with_exponent(field, left_over))
        weight = pattern_weight(matrix, rows, cols)
        produced.append(
            Monomial(
                coeff=joined.coeff * as_coeff(weight),
                factors=tuple(left_rest + right_rest + remaining + kernels),
                points=joined.points,
                lam=joined.lam,
                hbar=joined.hbar + order,
            )
        )
    return produced


def self_contractions(monomial: Monomial, kind: KernelKind) -> List[Monomial]:
    """One application of ⟨K, δ²/δφδφ⟩ (ordered slot pairs, no ℏ attached)."""

    slots = field_slots(monomial)
    produced: List[Monomial] = []
    for i, (pos_i, field_i) in enumerate(slots):
        for j, (pos_j, field_j) in enumerate(slots):
            if i == j:
                if field_i.exponent < 2:
                    continue
                weight = field_i.exponent * (field_i.exponent - 1)
                exponents = {pos_i: field_i.exponent - 2}
            else:
                weight = field_i.exponent * field_j.exponent
                exponents = {pos_i: field_i.exponent - 1, pos_j: field_j.exponent - 1}
            factors: List[Factor] = []
            for position, factor in enumerate(monomial.factors):
                if position in exponents:
                    if exponents[position]:
                        factors.append(with_exponent(factor, exponents[position]))
                    continue
                factors.append(factor)
            factors.append(Kernel(kind, field_i.point, field_j.point, field_i.chain, field_j.chain))
            produced.append(
                Monomial(
                    coeff=monomial.coeff * weight,
                    factors=tuple(factors),
                    points=monomial.points,
                    lam=monomial.lam,
                    hbar=monomial.hbar,
                )
            )
    return produced
