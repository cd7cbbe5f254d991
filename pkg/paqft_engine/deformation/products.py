"""Deformed products ⋆_K, Wick-ordering maps and time-ordered products."""

from __future__ import annotations

from dataclasses import replace
from functools import reduce
from typing import List, Optional

import sympy

from ..expr.canonical import KERNEL_SYMMETRY, CanonicalPolicy
from ..expr.coeff import CoeffElem
from ..expr.factors import KernelKind
from ..expr.monomial import Monomial
from ..functional.builders import identity
from ..functional.core import Functional, separate
from .contraction import contract, self_contractions


def star(F: Functional, G: Functional, kind: KernelKind, vacuum_only: bool = False) -> Functional:
    """F ⋆_K G = Σ_k ℏ^k/k! ⟨K^{⊗k}, F^{(k)} ⊗ G^{(k)}⟩ on the diagonal.

    With `vacuum_only` only fully contracted terms of field-free remainders are kept.
    """

    kind = KernelKind(kind)
    truncation = min(F.truncation, G.truncation)
    produced: List[Monomial] = []
    for left in F.monomials:
        for right in G.monomials:
            if left.lam + right.lam > truncation:
                continue
            a, b = separate(left, right)
            produced.extend(contract(a, b, kind, exhaustive=vacuum_only))
    return Functional.of(produced, truncation, F.body.policy or G.body.policy, F.bound_labels | G.bound_labels)


def wick_order(F: Functional, sign: int, kernel: KernelKind = KernelKind.H) -> Functional:
    """α_{sign·K}: apply exp(sign·(ℏ/2)⟨K, δ²/δφδφ⟩)."""

    if sign not in (1, -1):
        raise ValueError(f"Wick-ordering sign must be +1 or -1, got {sign!r}")
    kernel = KernelKind(kernel)
    produced: List[Monomial] = list(F.monomials)
    current: List[Monomial] = list(F.monomials)
    order = 0
    while current:
        order += 1
        step = CoeffElem.of(sympy.Rational(sign, 2 * order))
        following: List[Monomial] = []
        for monomial in current:
            for term in self_contractions(monomial, kernel):
                following.append(term.scaled(step, hbar=1))
        produced.extend(following)
        current = following
    return Functional.of(produced, F.truncation, F.body.policy, F.bound_labels)


def _feynman_symmetric(policy: Optional[CanonicalPolicy]) -> CanonicalPolicy:
    base = policy or KERNEL_SYMMETRY
    return replace(base, symmetric=base.symmetric | {KernelKind.HF})


def time_ordered(*functionals: Functional) -> Functional:
    """𝒯(F₁,…,F_m): pairwise H_F contractions between distinct arguments.

    The result is canonicalized with H_F symmetric, so it does not depend on argument order.
    """

    if not functionals:
        return identity()
    product = reduce(lambda left, right: star(left, right, KernelKind.HF), functionals)
    return Functional(product.body.with_policy(_feynman_symmetric(product.body.policy)), product.bound_labels)
