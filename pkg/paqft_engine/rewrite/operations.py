"""Divergence, trace contraction and on-shell reduction on symbolic expressions."""

from __future__ import annotations

from dataclasses import replace
from typing import List, Optional

from ..expr.calculus import apply_chain, differentiate_monomial
from ..expr.expression import SymExpr
from ..expr.factors import P0, Field, Geom, Index, with_exponent
from ..expr.monomial import Monomial, Point
from ..perturbation.interaction import InteractionSpec
from .background import MINKOWSKI, BackgroundDescriptor
from .engine import Ruleset, apply_rules
from .rules import IndexContractionError, RewriteContext


TRACE_RULES = Ruleset(("metric_contraction", "curvature_traces"))


def _free_occurrence(monomial: Monomial, index: str) -> Index:
    occurrences = monomial.index_occurrences(index)
    if len(occurrences) != 1:
        status = "contracted" if occurrences else "absent"
        raise IndexContractionError(f"Index {index!r} is {status} in {monomial}")
    return occurrences[0][1]


def apply_divergence(e: SymExpr, index: str, at: str) -> SymExpr:
    """∇^index at point `at`, distributed by the Leibniz rule over every monomial."""

    produced: List[Monomial] = []
    for monomial in e:
        occurrence = _free_occurrence(monomial, index)
        produced.extend(differentiate_monomial(monomial, at, occurrence.flipped()))
    return SymExpr.build(produced, e.truncation, e.policy)


def _with_point(monomial: Monomial, label: str) -> Monomial:
    if label in monomial.point_labels():
        return monomial
    return replace(monomial, points=monomial.points | {Point(label)})


def trace_contract(
    e: SymExpr,
    at: str,
    background: BackgroundDescriptor = MINKOWSKI,
    context: Optional[RewriteContext] = None,
) -> SymExpr:
    """g^{μν}(at) T_{μν}: contract the two free indices of every monomial."""

    produced: List[Monomial] = []
    for monomial in e:
        free = monomial.free_indices()
        if len(free) != 2:
            raise IndexContractionError(f"Trace needs exactly two free indices, found {free} in {monomial}")
        first, second = (_free_occurrence(monomial, name) for name in free)
        inverse = Geom("metric", (first.flipped(), second.flipped()), at)
        located = _with_point(monomial, at)
        produced.append(replace(located, factors=located.factors + (inverse,)))
    return apply_rules(SymExpr.build(produced, e.truncation, e.policy), TRACE_RULES, background, context)


def _reduce_monomial(monomial: Monomial, V: Optional[InteractionSpec]) -> List[Monomial]:
    for position, factor in enumerate(monomial.factors):
        if not isinstance(factor, Field) or not factor.chain or factor.chain[0] != P0:
            continue
        if V is None:
            return []
        rest = factor.chain[1:]
        source = Field(factor.point, (), V.power - 1)
        remaining = (with_exponent(factor, factor.exponent - 1),) if factor.exponent > 1 else ()
        produced: List[Monomial] = []
        for weight, factors in apply_chain([(V.eom_coefficient, (source,))], factor.point, rest):
            replaced = monomial.factors[:position] + remaining + factors + monomial.factors[position + 1 :]
            reduced = replace(monomial, factors=replaced, coeff=monomial.coeff * weight, lam=monomial.lam + 1)
            produced.extend(_reduce_monomial(reduced, V))
        return produced
    return [monomial]


def reduce_modulo_eom(e: SymExpr, V: Optional[InteractionSpec] = None) -> SymExpr:
    """Substitute P₀φ = λφ^{n-1}/(n-1)! (or 0 for the free field) into every Field factor."""

    produced: List[Monomial] = []
    for monomial in e:
        produced.extend(_reduce_monomial(monomial, V))
    return SymExpr.build(produced, e.truncation, e.policy)
