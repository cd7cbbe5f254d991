"""Polynomial functionals of the field and their classical operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple

from ..expr.calculus import collapse_delta, normalize_free_delta
from ..expr.canonical import CanonicalPolicy
from ..expr.coeff import CoeffElem, Scalar
from ..expr.expression import DEFAULT_TRUNCATION, SymExpr, add, mul_scalar
from ..expr.factors import Field, Kernel, KernelKind, with_exponent
from ..expr.monomial import Monomial, Point


class LabelCollisionError(ValueError):
    """Raised when a derivative point label is already bound in the functional."""


@dataclass(frozen=True)
class Functional:
    """A polynomial functional; Field factors stand for φ at labelled points.

    `bound_labels` remembers every point label the caller used, including
    integration points that canonicalization renamed to reserved labels.
    """

    body: SymExpr
    bound_labels: FrozenSet[str] = field(default=frozenset(), compare=False)

    @classmethod
    def of(
        cls,
        monomials: Iterable[Monomial],
        truncation: int = DEFAULT_TRUNCATION,
        policy: Optional[CanonicalPolicy] = None,
        bound: Iterable[str] = (),
    ) -> "Functional":
        monomials = tuple(monomials)
        labels = {label for monomial in monomials for label in monomial.point_labels()}
        return cls(SymExpr.build(monomials, truncation, policy), frozenset(labels.union(bound)))

    @property
    def truncation(self) -> int:
        return self.body.truncation

    @property
    def degree(self) -> int:
        return max((m.field_degree() for m in self.body.monomials), default=0)

    @property
    def monomials(self) -> Tuple[Monomial, ...]:
        return self.body.monomials

    def __add__(self, other: "Functional") -> "Functional":
        return Functional(add(self.body, other.body), self.bound_labels | other.bound_labels)

    def __sub__(self, other: "Functional") -> "Functional":
        return Functional(add(self.body, mul_scalar(-1, other.body)), self.bound_labels | other.bound_labels)

    def scaled(self, scalar: Scalar, lam: int = 0, hbar: int = 0) -> "Functional":
        return Functional(mul_scalar(scalar, self.body, lam=lam, hbar=hbar), self.bound_labels)

    def with_truncation(self, truncation: int) -> "Functional":
        return Functional(self.body.with_truncation(truncation), self.bound_labels)


def separate(left: Monomial, right: Monomial) -> Tuple[Monomial, Monomial]:
    """Rename integrated points and dummy indices so the two monomials share only free labels."""

    left = left.renamed_apart(right.point_labels(), right.free_indices())
    right = right.renamed_apart(left.point_labels(), left.index_counts().keys())
    return left, right


def pointwise_product(F: Functional, G: Functional) -> Functional:
    truncation = min(F.truncation, G.truncation)
    produced: List[Monomial] = []
    for left in F.monomials:
        for right in G.monomials:
            if left.lam + right.lam > truncation:
                continue
            a, b = separate(left, right)
            produced.append(a.times(b))
    return Functional.of(produced, truncation, F.body.policy or G.body.policy, F.bound_labels | G.bound_labels)


def _derivative_terms(monomial: Monomial, point: str) -> List[Monomial]:
    terms: List[Monomial] = []
    declared = monomial.points | {Point(point)}
    for position, factor in enumerate(monomial.factors):
        if not isinstance(factor, Field):
            continue
        remaining = () if factor.exponent == 1 else (with_exponent(factor, factor.exponent - 1),)
        delta = Kernel(KernelKind.DIRAC, factor.point, point, chain_first=factor.chain)
        factors = monomial.factors[:position] + remaining + monomial.factors[position + 1 :] + (delta,)
        raw = Monomial(
            coeff=monomial.coeff * factor.exponent,
            factors=factors,
            points=declared,
            lam=monomial.lam,
            hbar=monomial.hbar,
        )
        terms.extend(_settle_delta(raw, len(factors) - 1))
    return terms


def _settle_delta(monomial: Monomial, position: int) -> List[Monomial]:
    delta = monomial.factors[position]
    if monomial.point(delta.first).integrated:  # type: ignore[union-attr]
        collapsed = collapse_delta(monomial, position)
        # P0 on an integrated slot stays under the integral
        return collapsed if collapsed is not None else [monomial]
    moved = normalize_free_delta(monomial, position)
    return [moved if moved is not None else monomial]


def functional_derivative(F: Functional, point: str) -> Functional:
    """δF/δφ(point) at a fresh free point."""

    if point in F.bound_labels or any(point in monomial.point_labels() for monomial in F.monomials):
        raise LabelCollisionError(f"Point {point!r} is already bound in the functional")
    produced: List[Monomial] = []
    for monomial in F.monomials:
        produced.extend(_derivative_terms(monomial, point))
    return Functional.of(produced, F.truncation, F.body.policy, F.bound_labels)


def vacuum_eval(F: Functional) -> SymExpr:
    """Evaluation at φ = 0: keep the field-free monomials."""

    body = F.body if isinstance(F, Functional) else F
    return SymExpr.build((m for m in body.monomials if not m.has_fields()), body.truncation, body.policy)


def identity_coefficient(expr: SymExpr) -> CoeffElem:
    """Coefficient of the factor-free monomial at λ⁰ℏ⁰."""

    for monomial in expr.monomials:
        if not monomial.factors and monomial.lam == 0 and monomial.hbar == 0:
            return monomial.coeff
    return CoeffElem.of(0)
