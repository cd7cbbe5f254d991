"""Registry of named one-way rewrite rules.

Every rule inspects one monomial and either declines (returns None) or returns the
monomials replacing it; an empty list means the monomial vanishes. Rules are grouped
in stages that the engine runs in the fixed order of STAGES.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import factorial
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import sympy

from ..expr.calculus import apply_chain, collapse_delta, normalize_free_delta
from ..expr.coeff import M2, XI, CoeffElem, I, Scalar
from ..expr.factors import P0, Factor, Field, Geom, Index, Kernel, KernelKind, TestFn, map_indices
from ..expr.monomial import Monomial, fresh_index
from .background import MINKOWSKI, BackgroundDescriptor


class RewriteError(RuntimeError):
    """Raised when a rule set cannot be applied."""


class IterationCapError(RewriteError):
    """Raised when rewriting does not reach a fixed point within the pass limit."""


class IndexContractionError(RewriteError):
    """Raised when an index is used against its free/contracted status."""


class UnknownRuleError(RewriteError):
    """Raised when a rule name is not registered."""


STAGES: Tuple[str, ...] = (
    "derivatives",
    "metric",
    "curvature",
    "eom",
    "delta",
    "adiabatic",
    "kernel",
    "background",
)

CURVATURE_TENSORS = frozenset({"einstein", "ricci", "ricci_scalar", "weyl"})


@dataclass(frozen=True)
class RewriteContext:
    """Parameters the rule bodies read: ξ for P₀, the dimension for traces, cutoff labels."""

    background: BackgroundDescriptor = MINKOWSKI
    xi: sympy.Expr = XI
    dimension: int = 4
    adiabatic_labels: FrozenSet[str] = frozenset({"h"})


RuleBody = Callable[[Monomial, RewriteContext], Optional[List[Monomial]]]
Guard = Callable[[BackgroundDescriptor], bool]


def _always(background: BackgroundDescriptor) -> bool:
    return True


def _curved_constant(background: BackgroundDescriptor) -> bool:
    return background.constant_curvature


@dataclass(frozen=True)
class RewriteRule:
    name: str
    stage: str
    body: RuleBody = field(compare=False)
    guard: Guard = field(default=_always, compare=False)
    description: str = ""

    def applies(self, background: BackgroundDescriptor) -> bool:
        return self.guard(background)

    def __call__(self, monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
        return self.body(monomial, context)


REGISTRY: Dict[str, RewriteRule] = {}


def register(name: str, stage: str, guard: Guard = _always):
    if stage not in STAGES:
        raise RewriteError(f"Unknown rewrite stage {stage!r}")

    def decorator(body: RuleBody) -> RuleBody:
        doc = (body.__doc__ or "").strip().splitlines()
        REGISTRY[name] = RewriteRule(name, stage, body, guard, doc[0] if doc else "")
        return body

    return decorator


def get_rule(name: str) -> RewriteRule:
    try:
        return REGISTRY[name]
    except KeyError as exc:
        raise UnknownRuleError(f"Unknown rewrite rule {name!r}") from exc


# -- helpers -------------------------------------------------------------------


def _replace(monomial: Monomial, position: int, factors: Sequence[Factor], coeff: Scalar = 1) -> Monomial:
    rebuilt = monomial.factors[:position] + tuple(factors) + monomial.factors[position + 1 :]
    result = monomial.with_factors(rebuilt)
    return replace(result, coeff=result.coeff * coeff)


def _geoms(monomial: Monomial) -> Iterator[Tuple[int, Geom]]:
    for position, factor in enumerate(monomial.factors):
        if isinstance(factor, Geom):
            yield position, factor


def _kernels(monomial: Monomial) -> Iterator[Tuple[int, Kernel]]:
    for position, factor in enumerate(monomial.factors):
        if isinstance(factor, Kernel):
            yield position, factor


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _expand_kernel(
    monomial: Monomial, position: int, parts: Sequence[Tuple[Scalar, KernelKind]]
) -> List[Monomial]:
    """Substitute K → Σ c_i K_i inside K^e by the multinomial theorem."""

    kernel = monomial.factors[position]
    assert isinstance(kernel, Kernel)
    produced: List[Monomial] = []
    for powers in _compositions(kernel.exponent, len(parts)):
        weight = CoeffElem.of(factorial(kernel.exponent))
        factors: List[Factor] = []
        for power, (coeff, kind) in zip(powers, parts):
            if not power:
                continue
            weight = weight * CoeffElem.of(sympy.Rational(1, factorial(power))) * CoeffElem.of(coeff) ** power
            factors.append(replace(kernel, kind=kind, exponent=power))
        produced.append(_replace(monomial, position, factors, weight))
    return produced


# -- derivatives ---------------------------------------------------------------


@register("metric_compatibility", "derivatives")
def metric_compatibility(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """∇g = 0."""

    for _, geom in _geoms(monomial):
        if geom.is_metric and geom.chain:
            return []
    return None


@register("box_commutator", "derivatives")
def box_commutator(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """□∇_ν f = ∇_ν□f + R_νρ∇^ρ f on scalars, moving a contracted pair innermost."""

    for position, factor in enumerate(monomial.factors):
        if isinstance(factor, Geom) and not factor.is_scalar():
            continue
        for slot, (point, chain) in enumerate(factor.slots()):
            if len(chain) != 3 or not all(isinstance(item, Index) for item in chain):
                continue
            inner, middle, outer = chain  # type: ignore[misc]
            if inner.name == middle.name:
                continue
            if outer.name == middle.name:
                pair, other = middle.name, inner
            elif outer.name == inner.name:
                pair, other = inner.name, middle
            else:
                continue
            rho = fresh_index(monomial)
            boxed = factor.with_slot(slot, chain=(Index(pair), Index(pair, True), other))
            ricci = Geom("ricci", (Index(other.name, other.up), Index(rho)), point)
            lowered = factor.with_slot(slot, chain=(Index(rho, True),))
            return [_replace(monomial, position, [boxed]), _replace(monomial, position, [ricci, lowered])]
    return None


# -- metric --------------------------------------------------------------------


@register("metric_contraction", "metric")
def metric_contraction(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """g_ab X^b → X_a."""

    for position, geom in _geoms(monomial):
        if not geom.is_metric or geom.chain:
            continue
        first, second = geom.tensor_indices
        if first.name == second.name:
            continue
        for contracted, target in ((first, second), (second, first)):
            partners = [where for where, _ in monomial.index_occurrences(contracted.name) if where != position]
            if not partners:
                continue
            where = partners[0]
            renamed = map_indices(
                monomial.factors[where],
                lambda index: Index(target.name, target.up) if index.name == contracted.name else index,
            )
            factors = list(monomial.factors)
            factors[where] = renamed
            del factors[position]
            return [monomial.with_factors(factors)]
    return None


@register("curvature_traces", "metric")
def curvature_traces(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """g^a_a = d, R^a_a = R, G^a_a = (1 - d/2)R, Weyl traces vanish."""

    d = context.dimension
    for position, geom in _geoms(monomial):
        names = [index.name for index in geom.tensor_indices]
        if len(names) < 2 or len(set(names)) == len(names):
            continue
        if geom.tensor == "weyl":
            return []
        if geom.is_metric:
            return [_replace(monomial, position, [], d)]
        scalar = Geom("ricci_scalar", (), geom.point, geom.chain)
        if geom.tensor == "ricci":
            return [_replace(monomial, position, [scalar])]
        if geom.tensor == "einstein":
            return [_replace(monomial, position, [scalar], sympy.Rational(2 - d, 2))]
    return None


# -- curvature -----------------------------------------------------------------


@register("contracted_bianchi", "curvature")
def contracted_bianchi(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """∇^a G_ab = 0 and ∇^a R_ab = ½∇_b R."""

    for position, geom in _geoms(monomial):
        if geom.tensor not in ("einstein", "ricci") or len(geom.chain) != 1:
            continue
        derivative = geom.chain[0]
        first, second = geom.tensor_indices
        if derivative.name == first.name and derivative.name != second.name:  # type: ignore[union-attr]
            other = second
        elif derivative.name == second.name and derivative.name != first.name:  # type: ignore[union-attr]
            other = first
        else:
            continue
        if geom.tensor == "einstein":
            return []
        gradient = Geom("ricci_scalar", (), geom.point, (Index(other.name, other.up),))
        return [_replace(monomial, position, [gradient], sympy.Rational(1, 2))]
    return None


@register("einstein_expand", "curvature")
def einstein_expand(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """G_ab = R_ab - ½ g_ab R."""

    for position, geom in _geoms(monomial):
        if geom.tensor != "einstein":
            continue
        ricci = Geom("ricci", geom.tensor_indices, geom.point, geom.chain)
        metric = Geom("metric", geom.tensor_indices, geom.point)
        scalar = Geom("ricci_scalar", (), geom.point, geom.chain)
        return [
            _replace(monomial, position, [ricci]),
            _replace(monomial, position, [metric, scalar], sympy.Rational(-1, 2)),
        ]
    return None


# -- equations of motion ---------------------------------------------------------


@register("box_to_p0", "eom")
def box_to_p0(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """□K = (m² + ξR)K - P₀K for an innermost box on a field or kernel slot."""

    for position, factor in enumerate(monomial.factors):
        if not isinstance(factor, (Field, Kernel)):
            continue
        if isinstance(factor, Kernel) and factor.first == factor.second:
            continue
        for slot, (point, chain) in enumerate(factor.slots()):
            if len(chain) < 2:
                continue
            inner, outer = chain[0], chain[1]
            if not (isinstance(inner, Index) and isinstance(outer, Index)) or inner.name != outer.name:
                continue
            rest = chain[2:]
            produced = [_replace(monomial, position, [factor.with_slot(slot, chain=rest)], M2)]
            if context.xi != 0:
                bare = factor.with_slot(slot, chain=())
                curvature = Geom("ricci_scalar", (), point)
                for weight, factors in apply_chain([(CoeffElem.of(context.xi), (curvature, bare))], point, rest):
                    produced.append(_replace(monomial, position, factors, weight))
            produced.append(_replace(monomial, position, [factor.with_slot(slot, chain=(P0,) + rest)], -1))
            return produced
    return None


@register("parametrix_eom", "eom")
def parametrix_eom(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """P₀H = P₀W = P₀Δ = 0, P₀H_F = cδ, P₀H_AF = c̄δ, P₀Δ_R = P₀Δ_A = δ."""

    factors = {
        KernelKind.HF: context.background.feynman_factor,
        KernelKind.HAF: context.background.anti_feynman_factor,
        KernelKind.DELTA_R: CoeffElem.of(1),
        KernelKind.DELTA_A: CoeffElem.of(1),
    }
    for position, kernel in _kernels(monomial):
        for slot, (_, chain) in enumerate(kernel.slots()):
            if not chain or chain[0] != P0:
                continue
            if kernel.kind in (KernelKind.H, KernelKind.W, KernelKind.DELTA):
                return []
            weight = factors.get(kernel.kind)
            if weight is None:
                continue
            delta = replace(kernel.with_slot(slot, chain=chain[1:]), kind=KernelKind.DIRAC)
            return [_replace(monomial, position, [delta], weight)]
    return None


# -- delta ---------------------------------------------------------------------


@register("delta_collapse", "delta")
def delta_collapse(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """∫δ(x, y) F(y) → F(x), with derivative transfer."""

    for position, kernel in _kernels(monomial):
        if kernel.kind is not KernelKind.DIRAC:
            continue
        collapsed = collapse_delta(monomial, position)
        if collapsed is not None:
            return collapsed
        moved = normalize_free_delta(monomial, position)
        if moved is not None:
            return [moved]
    return None


# -- adiabatic -----------------------------------------------------------------


@register("adiabatic_cutoff", "adiabatic")
def adiabatic_cutoff(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """The interaction cutoff equals one near the observation point."""

    for position, factor in enumerate(monomial.factors):
        if not isinstance(factor, TestFn) or factor.label not in context.adiabatic_labels:
            continue
        if monomial.point(factor.point).integrated:
            continue
        if factor.chain:
            return []
        return [_replace(monomial, position, [])]
    return None


# -- kernel relations -------------------------------------------------------------


HALF = sympy.Rational(1, 2)

SPLITS: Dict[str, Dict[KernelKind, Tuple[Tuple[Scalar, KernelKind], ...]]] = {
    "feynman_split": {KernelKind.HF: ((1, KernelKind.H), (I, KernelKind.DELTA_A))},
    "anti_feynman_split": {KernelKind.HAF: ((1, KernelKind.H), (-I, KernelKind.DELTA_R))},
    "causal_split": {KernelKind.DELTA: ((1, KernelKind.DELTA_R), (-1, KernelKind.DELTA_A))},
    "symmetric_basis": {
        KernelKind.H: ((HALF, KernelKind.HF), (HALF, KernelKind.HAF), (I * HALF, KernelKind.DELTA)),
        KernelKind.DELTA_R: ((-I * HALF, KernelKind.HF), (I * HALF, KernelKind.HAF), (HALF, KernelKind.DELTA)),
        KernelKind.DELTA_A: ((-I * HALF, KernelKind.HF), (I * HALF, KernelKind.HAF), (-HALF, KernelKind.DELTA)),
    },
}


def _split_rule(name: str, summary: str) -> RuleBody:
    table = SPLITS[name]

    def body(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
        for position, kernel in _kernels(monomial):
            parts = table.get(kernel.kind)
            if parts is not None:
                return _expand_kernel(monomial, position, parts)
        return None

    body.__doc__ = summary
    return body


register("feynman_split", "kernel")(_split_rule("feynman_split", "H_F = H + iΔ_A"))
register("anti_feynman_split", "kernel")(_split_rule("anti_feynman_split", "H_AF = H - iΔ_R"))
register("causal_split", "kernel")(_split_rule("causal_split", "Δ = Δ_R - Δ_A"))
register("symmetric_basis", "kernel")(_split_rule("symmetric_basis", "H, Δ_R and Δ_A through H_F, H_AF and Δ"))


@register("disjoint_support", "kernel")
def disjoint_support(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """Δ_A(x,y)Δ_R(x,y) = 0, hence Δ² = -(H_F - H_AF)²."""

    kernels = [(position, kernel) for position, kernel in _kernels(monomial) if not kernel.chain_first and not kernel.chain_second]
    for _, advanced in kernels:
        if advanced.kind is not KernelKind.DELTA_A:
            continue
        for _, retarded in kernels:
            if retarded.kind is KernelKind.DELTA_R and (retarded.first, retarded.second) == (advanced.first, advanced.second):
                return []
    for position, kernel in kernels:
        if kernel.kind is not KernelKind.DELTA or kernel.exponent < 2:
            continue
        rest = [replace(kernel, exponent=kernel.exponent - 2)] if kernel.exponent > 2 else []
        feynman = replace(kernel, kind=KernelKind.HF, exponent=1)
        anti = replace(kernel, kind=KernelKind.HAF, exponent=1)
        return [
            _replace(monomial, position, rest + [replace(feynman, exponent=2)], -1),
            _replace(monomial, position, rest + [feynman, anti], 2),
            _replace(monomial, position, rest + [replace(anti, exponent=2)], -1),
        ]
    return None


# -- background ------------------------------------------------------------------


@register("background_curvature", "background", guard=_curved_constant)
def background_curvature(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """Flat space: curvature vanishes. Maximally symmetric: R_ab = (R/d) g_ab, ∇R = 0, C = 0."""

    d = context.dimension
    for position, geom in _geoms(monomial):
        if geom.tensor not in CURVATURE_TENSORS:
            continue
        if context.background.flat or geom.tensor == "weyl" or geom.chain:
            return []
        if geom.tensor == "ricci_scalar":
            continue
        metric = Geom("metric", geom.tensor_indices, geom.point)
        scalar = Geom("ricci_scalar", (), geom.point)
        weight = sympy.Rational(1, d) if geom.tensor == "ricci" else sympy.Rational(1, d) - HALF
        return [_replace(monomial, position, [metric, scalar], weight)]
    return None


V1_MINKOWSKI = M2**2 / 8


@register("background_v1", "background", guard=_curved_constant)
def background_v1(monomial: Monomial, context: RewriteContext) -> Optional[List[Monomial]]:
    """∂v₁ = 0 on constant-curvature backgrounds; v₁ = m⁴/8 on Minkowski."""

    for position, geom in _geoms(monomial):
        if geom.tensor != "v1":
            continue
        if geom.chain:
            return []
        if context.background.flat:
            return [_replace(monomial, position, [], V1_MINKOWSKI**geom.exponent)]
    return None
