"""Covariant-derivative calculus on factor lists: Leibniz rule, point substitution, δ-collapse."""

from __future__ import annotations

from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

from .coeff import CoeffElem, ONE
from .errors import StructuralError
from .factors import P0, Chain, Factor, Geom, Index, Kernel, KernelKind, rename_factor, with_exponent
from .monomial import Monomial


Term = Tuple[CoeffElem, Tuple[Factor, ...]]


def differentiate_factors(factors: Sequence[Factor], point: str, index: Index) -> List[Term]:
    """∇_index at `point` distributed over every slot sitting at that point.

    The metric is covariantly constant and is skipped; powers follow ∇(X^e) = e X^{e-1} ∇X.
    """

    factors = tuple(factors)
    results: List[Term] = []
    for position, factor in enumerate(factors):
        if isinstance(factor, Geom) and factor.is_metric:
            continue
        for slot, (slot_point, chain) in enumerate(factor.slots()):
            if slot_point != point:
                continue
            single = with_exponent(factor, 1) if factor.exponent > 1 else factor
            derived = single.with_slot(slot, chain=chain + (index,))
            if factor.exponent > 1:
                rest = with_exponent(factor, factor.exponent - 1)
                replaced = factors[:position] + (rest, derived) + factors[position + 1 :]
                results.append((CoeffElem.of(factor.exponent), replaced))
            else:
                replaced = factors[:position] + (derived,) + factors[position + 1 :]
                results.append((ONE, replaced))
    return results


def apply_chain(terms: Sequence[Term], point: str, chain: Chain) -> List[Term]:
    """Apply a derivative chain (innermost first) at `point` to every term."""

    current = list(terms)
    for item in chain:
        if item == P0:
            raise StructuralError("P0 cannot be distributed over a product of factors")
        produced: List[Term] = []
        for coeff, factors in current:
            for weight, derived in differentiate_factors(factors, point, item):  # type: ignore[arg-type]
                produced.append((coeff * weight, derived))
        current = produced
    return current


def differentiate_monomial(monomial: Monomial, point: str, index: Index) -> List[Monomial]:
    if point not in monomial.point_labels():
        return []
    return [
        replace(monomial, coeff=monomial.coeff * weight, factors=factors)
        for weight, factors in differentiate_factors(monomial.factors, point, index)
    ]


def substitute_factors(factors: Sequence[Factor], old: str, new: str) -> Tuple[Factor, ...]:
    return tuple(rename_factor(factor, {old: new}, {}) for factor in factors)


def collapse_delta(monomial: Monomial, position: int) -> Optional[List[Monomial]]:
    """Integrate out one point of a Dirac δ factor.

    Derivatives on the integrated slot move to the co-factors at that point by parts
    (sign (-1)^k, reversed order); derivatives on the kept slot then act on the moved
    co-factors only. Returns None when the δ cannot be collapsed.
    """

    delta = monomial.factors[position]
    if not isinstance(delta, Kernel) or delta.kind is not KernelKind.DIRAC or delta.exponent != 1:
        return None
    if delta.first == delta.second:
        return None
    first = monomial.point(delta.first)
    second = monomial.point(delta.second)
    if second.integrated:
        gone, kept, gone_chain, kept_chain = second, first, delta.chain_second, delta.chain_first
    elif first.integrated:
        gone, kept, gone_chain, kept_chain = first, second, delta.chain_first, delta.chain_second
    else:
        return None
    if P0 in gone_chain or P0 in kept_chain:
        return None

    others = monomial.factors[:position] + monomial.factors[position + 1 :]
    sign = CoeffElem.of((-1) ** len(gone_chain))
    terms = apply_chain([(sign, others)], gone.label, tuple(reversed(gone_chain)))
    terms = apply_chain(terms, gone.label, kept_chain)
    points = [point for point in monomial.points if point.label != gone.label]
    return [
        Monomial(
            coeff=monomial.coeff * weight,
            factors=substitute_factors(factors, gone.label, kept.label),
            points=frozenset(points),
            lam=monomial.lam,
            hbar=monomial.hbar,
        )
        for weight, factors in terms
    ]


def normalize_free_delta(monomial: Monomial, position: int) -> Optional[Monomial]:
    """δ(p, q) between free points: move co-factors at the larger label to the smaller one."""

    delta = monomial.factors[position]
    if not isinstance(delta, Kernel) or delta.kind is not KernelKind.DIRAC:
        return None
    if delta.chain_first or delta.chain_second or delta.first == delta.second:
        return None
    if monomial.point(delta.first).integrated or monomial.point(delta.second).integrated:
        return None
    low, high = sorted((delta.first, delta.second))
    others = monomial.factors[:position] + monomial.factors[position + 1 :]
    if not any(high in (point for point, _ in factor.slots()) for factor in others) and delta.first == low:
        return None
    oriented = replace(delta, first=low, second=high)
    return replace(monomial, factors=substitute_factors(others, high, low) + (oriented,))
