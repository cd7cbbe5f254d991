"""Sums of canonical monomials truncated in the coupling λ."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

import sympy

from .canonical import CanonicalPolicy, canonical_monomial, monomial_key
from .coeff import CoeffElem, Scalar
from .errors import StructuralError
from .monomial import Monomial


DEFAULT_TRUNCATION = 2


@dataclass(frozen=True)
class SymExpr:
    """Canonical sum of monomials; every instance is already merged and sorted."""

    monomials: Tuple[Monomial, ...] = ()
    truncation: int = DEFAULT_TRUNCATION
    policy: Optional[CanonicalPolicy] = None

    @classmethod
    def build(
        cls,
        monomials: Iterable[Monomial],
        truncation: int = DEFAULT_TRUNCATION,
        policy: Optional[CanonicalPolicy] = None,
    ) -> "SymExpr":
        if truncation < 0:
            raise StructuralError("Truncation order must be non-negative")
        merged: Dict[tuple, Monomial] = {}
        for monomial in monomials:
            if monomial.lam > truncation:
                continue
            canonical = canonical_monomial(monomial, policy)
            if canonical is None:
                continue
            key = monomial_key(canonical)
            existing = merged.get(key)
            if existing is not None:
                canonical = replace(existing, coeff=existing.coeff + canonical.coeff)
            merged[key] = canonical
        ordered = sorted((m for m in merged.values() if not m.coeff.is_zero), key=monomial_key)
        return cls(tuple(ordered), truncation, policy)

    @classmethod
    def zero(cls, truncation: int = DEFAULT_TRUNCATION) -> "SymExpr":
        return cls((), truncation)

    @classmethod
    def scalar(cls, value: Scalar, truncation: int = DEFAULT_TRUNCATION) -> "SymExpr":
        return cls.build([Monomial(coeff=CoeffElem.of(value))], truncation)

    # -- container protocol --------------------------------------------------

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.monomials)

    def __len__(self) -> int:
        return len(self.monomials)

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    # -- arithmetic ------------------------------------------------------------

    def _check_compatible(self, other: "SymExpr") -> None:
        if self.truncation != other.truncation:
            raise StructuralError(
                f"Truncation mismatch: {self.truncation} vs {other.truncation}; use with_truncation first"
            )

    def __add__(self, other: "SymExpr") -> "SymExpr":
        return add(self, other)

    def __sub__(self, other: "SymExpr") -> "SymExpr":
        return add(self, negate(other))

    def __neg__(self) -> "SymExpr":
        return negate(self)

    def with_truncation(self, truncation: int) -> "SymExpr":
        return SymExpr.build(self.monomials, truncation, self.policy)

    def with_policy(self, policy: Optional[CanonicalPolicy]) -> "SymExpr":
        return SymExpr.build(self.monomials, self.truncation, policy)

    def by_lambda(self) -> Dict[int, "SymExpr"]:
        """Split into homogeneous λ-orders."""

        orders: Dict[int, List[Monomial]] = {}
        for monomial in self.monomials:
            orders.setdefault(monomial.lam, []).append(monomial)
        return {
            order: SymExpr.build(items, self.truncation, self.policy) for order, items in sorted(orders.items())
        }

    def lambda_order(self, order: int) -> "SymExpr":
        return SymExpr.build((m for m in self.monomials if m.lam == order), self.truncation, self.policy)

    def subs(self, mapping: Mapping[sympy.Expr, Scalar]) -> "SymExpr":
        return SymExpr.build(
            (replace(m, coeff=m.coeff.subs(mapping)) for m in self.monomials), self.truncation, self.policy
        )

    def free_symbols(self) -> frozenset:
        symbols: frozenset = frozenset()
        for monomial in self.monomials:
            symbols |= monomial.coeff.free_symbols()
        return symbols


def _joint_policy(e1: SymExpr, e2: SymExpr) -> Optional[CanonicalPolicy]:
    return e1.policy if e1.policy is not None else e2.policy


def add(e1: SymExpr, e2: SymExpr) -> SymExpr:
    e1._check_compatible(e2)
    return SymExpr.build(e1.monomials + e2.monomials, e1.truncation, _joint_policy(e1, e2))


def negate(e: SymExpr) -> SymExpr:
    return SymExpr(tuple(replace(m, coeff=-m.coeff) for m in e.monomials), e.truncation, e.policy)


def mul_scalar(c: Scalar, e: SymExpr, lam: int = 0, hbar: int = 0) -> SymExpr:
    return SymExpr.build((m.scaled(c, lam=lam, hbar=hbar) for m in e.monomials), e.truncation, e.policy)


def sum_exprs(exprs: Iterable[SymExpr], truncation: int = DEFAULT_TRUNCATION) -> SymExpr:
    monomials: List[Monomial] = []
    policy: Optional[CanonicalPolicy] = None
    for expr in exprs:
        if expr.truncation != truncation:
            raise StructuralError(f"Truncation mismatch: {expr.truncation} vs {truncation}")
        policy = policy or expr.policy
        monomials.extend(expr.monomials)
    return SymExpr.build(monomials, truncation, policy)


def canonicalize(e: SymExpr, policy: Optional[CanonicalPolicy] = None) -> SymExpr:
    return SymExpr.build(e.monomials, e.truncation, policy if policy is not None else e.policy)


def equal(e1: SymExpr, e2: SymExpr) -> bool:
    """Structural equality after canonicalizing both sides under a common policy."""

    policy = _joint_policy(e1, e2)
    truncation = min(e1.truncation, e2.truncation)
    left = SymExpr.build(e1.monomials, truncation, policy)
    right = SymExpr.build(e2.monomials, truncation, policy)
    return left.monomials == right.monomials
