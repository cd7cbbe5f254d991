"""Second-order divergence and trace pipelines, the η-solver and the classical layer."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional

import sympy

from ..expr.coeff import ETA, PI, CoeffElem
from ..expr.expression import SymExpr, add
from ..expr.factors import Geom, Index
from ..expr.monomial import Monomial, Point
from ..functional.core import vacuum_eval
from ..logging_utils.logger import get_logger, log_with_context
from ..monitoring.metrics import MetricsRecorder
from ..perturbation.smatrix import interacting_vev
from ..rewrite.background import BackgroundDescriptor
from ..rewrite.engine import BACKGROUND_RULES, CLASSICAL, DEFAULT_MAX_PASSES, DIVERGENCE, TRACE, Ruleset, apply_rules
from ..rewrite.operations import apply_divergence, reduce_modulo_eom, trace_contract
from ..rewrite.rules import RewriteContext
from .build import MU, NU, SET_POINT, build_set
from .closed_forms import free_divergence, free_trace
from .spec import SETSpec


PERTURBATIVE_ORDER = 2


class EtaSolveError(ValueError):
    """Raised when the divergence residual does not single out one value of η."""


def rewrite_context(spec: SETSpec) -> RewriteContext:
    return RewriteContext(
        background=spec.background,
        xi=spec.xi_value,
        dimension=spec.dimension,
        adiabatic_labels=frozenset({spec.test_label}),
    )


def divergence_rules(spec: SETSpec) -> Ruleset:
    rules = DIVERGENCE if spec.adiabatic_cutoff else DIVERGENCE.without("adiabatic_cutoff")
    return rules.without(*spec.disabled_rules)


def trace_rules(spec: SETSpec) -> Ruleset:
    return TRACE.without(*spec.disabled_rules)


def classical_rules(spec: SETSpec) -> Ruleset:
    dropped = [name for name in spec.disabled_rules if name in CLASSICAL.rules]
    return CLASSICAL.without(*dropped)


@lru_cache(maxsize=None)
def _symbolic_vev(spec: SETSpec) -> SymExpr:
    T = build_set(spec, PERTURBATIVE_ORDER)
    V = spec.interaction_spec
    if V is None:
        return vacuum_eval(T)
    vev = interacting_vev(T, V, PERTURBATIVE_ORDER)
    log_with_context(
        get_logger(),
        logging.INFO,
        "Stress-energy expectation value expanded",
        interaction=spec.interaction,
        terms=len(vev),
    )
    return vev


def set_vev(spec: SETSpec) -> SymExpr:
    """⟨R_{λV}(T^η_{μν}(z))⟩ through λ², computed once per interaction and substituted."""

    return _symbolic_vev(spec.symbolic()).subs(spec.substitutions())


def _log_orders(message: str, spec: SETSpec, expr: SymExpr) -> None:
    log_with_context(
        get_logger(),
        logging.INFO,
        message,
        interaction=spec.interaction,
        background=spec.background.regime.value,
        terms_by_order={order: len(part) for order, part in expr.by_lambda().items()},
    )


def divergence_order2(
    spec: SETSpec, metrics: Optional[MetricsRecorder] = None, max_passes: int = DEFAULT_MAX_PASSES
) -> SymExpr:
    """∇^μ⟨T^η_{μν}(z)⟩ through λ², with the λ⁰ closed form added; empty when conserved."""

    context = rewrite_context(spec)
    rules = divergence_rules(spec)
    diverged = apply_divergence(set_vev(spec), MU, SET_POINT)
    quantum = apply_rules(diverged, rules, spec.background, context, metrics, max_passes)
    free = apply_rules(free_divergence(spec), rules, spec.background, context, metrics, max_passes)
    residual = add(quantum, free.with_policy(quantum.policy))
    _log_orders("Divergence residual computed", spec, residual)
    return residual


def _linear_parts(residual: SymExpr) -> List[tuple]:
    parts = []
    for monomial in residual:
        linear = monomial.coeff.linear_parts(ETA)
        if linear is None:
            raise EtaSolveError(f"Residual coefficient is not affine in eta: {monomial.coeff}")
        parts.append(linear)
    return parts


def solve_linear_eta(residual: SymExpr) -> sympy.Expr:
    """The unique η annihilating every monomial of an η-affine residual."""

    parts = _linear_parts(residual)
    pivots = [(slope, intercept) for slope, intercept in parts if sympy.simplify(slope) != 0]
    if not pivots:
        if all(sympy.simplify(intercept) == 0 for _, intercept in parts):
            raise EtaSolveError("Residual vanishes for every eta; the solution is not unique")
        raise EtaSolveError("Residual does not depend on eta and is nonzero; no solution")
    slope, intercept = pivots[0]
    candidate = sympy.nsimplify(sympy.simplify(-intercept / slope))
    for slope, intercept in parts:
        if sympy.simplify(slope * candidate + intercept) != 0:
            raise EtaSolveError(f"No single eta annihilates the residual (eta = {candidate} fails)")
    if candidate.free_symbols:
        raise EtaSolveError(f"Solution depends on free parameters: {candidate}")
    return candidate


def solve_eta(spec: SETSpec, metrics: Optional[MetricsRecorder] = None) -> sympy.Expr:
    if not spec.eta_symbolic:
        raise EtaSolveError("solve_eta needs a symbolic eta")
    solution = solve_linear_eta(divergence_order2(spec, metrics))
    log_with_context(get_logger(), logging.INFO, "Conservation fixes eta", interaction=spec.interaction, eta=str(solution))
    return solution


@dataclass(frozen=True)
class ConservationCheck:
    spec: SETSpec
    residual: SymExpr
    eta_solution: Optional[sympy.Expr]
    residual_at_solution: Optional[SymExpr]
    note: Optional[str] = None

    @property
    def conserved(self) -> bool:
        final = self.residual_at_solution if self.residual_at_solution is not None else self.residual
        return final.is_zero


def check_conservation(spec: SETSpec, metrics: Optional[MetricsRecorder] = None) -> ConservationCheck:
    residual = divergence_order2(spec, metrics)
    if not spec.eta_symbolic:
        return ConservationCheck(spec, residual, None, None)
    try:
        solution = solve_linear_eta(residual)
    except EtaSolveError as exc:
        return ConservationCheck(spec, residual, None, None, str(exc))
    return ConservationCheck(spec, residual, solution, residual.subs({ETA: solution}))


def trace_order2(
    spec: SETSpec, metrics: Optional[MetricsRecorder] = None, max_passes: int = DEFAULT_MAX_PASSES
) -> SymExpr:
    """g^{μν}⟨T^η_{μν}(z)⟩ through λ², with the λ⁰ closed form added."""

    context = rewrite_context(spec)
    rules = trace_rules(spec)
    traced = trace_contract(set_vev(spec), SET_POINT, spec.background, context)
    quantum = apply_rules(traced, rules, spec.background, context, metrics, max_passes)
    free = apply_rules(free_trace(spec), rules, spec.background, context, metrics, max_passes)
    result = add(quantum, free.with_policy(quantum.policy))
    _log_orders("Trace computed", spec, result)
    return result


def trace_cubic(
    spec: Optional[SETSpec] = None, metrics: Optional[MetricsRecorder] = None
) -> SymExpr:
    """Trace for the cubic interaction, by default at η = 1/3, ξ = 1/6 on Minkowski space."""

    if spec is None:
        spec = SETSpec(3, xi=sympy.Rational(1, 6), eta=sympy.Rational(1, 3))
    if spec.interaction != 3:
        raise ValueError(f"trace_cubic needs the cubic interaction, got {spec.interaction!r}")
    return trace_order2(spec, metrics)


def on_shell(expr: SymExpr, spec: SETSpec) -> SymExpr:
    """Normalize with the classical rules and reduce modulo the field equation."""

    context = rewrite_context(spec)
    rules = classical_rules(spec)
    normalized = apply_rules(expr, rules, spec.background, context)
    reduced = reduce_modulo_eom(normalized, spec.interaction_spec)
    return apply_rules(reduced, rules, spec.background, context)


def classical_divergence(spec: SETSpec) -> SymExpr:
    """∇^μ T^η_{μν}[φ] on shell; empty for the consistent potential sign."""

    return on_shell(apply_divergence(build_set(spec).body, MU, SET_POINT), spec)


def classical_trace(spec: SETSpec) -> SymExpr:
    """g^{μν} T^η_{μν}[φ] on shell."""

    context = rewrite_context(spec)
    return on_shell(trace_contract(build_set(spec).body, SET_POINT, spec.background, context), spec)


@dataclass(frozen=True)
class AmbiguityTensor:
    tensor: SymExpr
    trace: SymExpr


def ambiguity_tensor(background: BackgroundDescriptor) -> AmbiguityTensor:
    """Q_{μν} = (1/π²) g_{μν} v₁(z) and its trace (4/π²) v₁(z)."""

    monomial = Monomial(
        coeff=CoeffElem.of(1 / PI**2),
        factors=(Geom("metric", (Index(MU), Index(NU)), SET_POINT), Geom("v1", (), SET_POINT)),
        points=frozenset({Point(SET_POINT)}),
    )
    rules = Ruleset(BACKGROUND_RULES)
    tensor = apply_rules(SymExpr.build([monomial]), rules, background)
    trace = apply_rules(trace_contract(SymExpr.build([monomial]), SET_POINT, background), rules, background)
    return AmbiguityTensor(tensor, trace)