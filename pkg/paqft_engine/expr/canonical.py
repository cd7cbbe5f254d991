"""Canonical form of monomials.

Integrated points are renamed to ``#1, #2, …`` (grouped by test-function label) and
dummy indices to ``#i1, #i2, …``; among all admissible renamings the one with the
smallest sorted factor key wins. Contracted pairs carry no up/down information in the
key; the canonical representative lowers the first occurrence and raises the second.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import permutations, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .factors import (
    P0,
    Chain,
    Factor,
    Geom,
    Index,
    Kernel,
    KernelKind,
    base_key,
    chain_key,
    map_indices,
    rename_factor,
    with_exponent,
)
from .monomial import RESERVED_PREFIX, Monomial, Point


BRUTE_FORCE_DUMMIES = 4
SYMMETRIC_TENSORS = frozenset({"metric", "ricci", "einstein"})


@dataclass(frozen=True)
class CanonicalPolicy:
    """Kernel symmetry table and derivative commutation applied while canonicalizing."""

    symmetric: FrozenSet[KernelKind] = frozenset()
    antisymmetric: FrozenSet[KernelKind] = frozenset()
    commute_scalar_derivatives: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "symmetric", frozenset(KernelKind(kind) for kind in self.symmetric))
        object.__setattr__(self, "antisymmetric", frozenset(KernelKind(kind) for kind in self.antisymmetric))


KERNEL_SYMMETRY = CanonicalPolicy(
    symmetric=frozenset({KernelKind.HF, KernelKind.HAF, KernelKind.DIRAC}),
    antisymmetric=frozenset({KernelKind.DELTA}),
)

FULL_POLICY = replace(KERNEL_SYMMETRY, commute_scalar_derivatives=True)


def merge_factors(factors: Iterable[Factor]) -> Tuple[Factor, ...]:
    """Merge identical index-free factors by adding exponents."""

    merged: Dict[tuple, Factor] = {}
    loose: List[Factor] = []
    for factor in factors:
        if factor.indices():
            loose.append(factor)
            continue
        key = base_key(factor)
        existing = merged.get(key)
        merged[key] = factor if existing is None else with_exponent(existing, existing.exponent + factor.exponent)
    return tuple(sorted(list(merged.values()) + loose, key=lambda f: f.key()))


def _commute_chain(chain: Chain) -> Chain:
    start = 1 if chain and chain[0] == P0 else 0
    if len(chain) < start + 2:
        return chain
    first, second = chain[start], chain[start + 1]
    if not (isinstance(first, Index) and isinstance(second, Index)):
        return chain
    if second.key() < first.key():
        return chain[:start] + (second, first) + chain[start + 2 :]
    return chain


def _normalize_factor(factor: Factor, dummies: FrozenSet[str], policy: Optional[CanonicalPolicy]) -> Tuple[Factor, int]:
    """Strip dummy positions, apply fixed symmetries and the policy; returns (factor, sign)."""

    factor = map_indices(factor, lambda index: Index(index.name) if index.name in dummies else index)
    if isinstance(factor, Geom) and factor.tensor in SYMMETRIC_TENSORS:
        factor = replace(factor, tensor_indices=tuple(sorted(factor.tensor_indices, key=lambda i: i.key())))
    if policy is None:
        return factor, 1
    if policy.commute_scalar_derivatives:
        for slot, (_, chain) in enumerate(factor.slots()):
            if isinstance(factor, Geom) and not factor.is_scalar():
                break
            factor = factor.with_slot(slot, chain=_commute_chain(chain))
    if not isinstance(factor, Kernel):
        return factor, 1
    kind = factor.kind
    if kind not in policy.symmetric and kind not in policy.antisymmetric:
        return factor, 1
    left = (factor.first, chain_key(factor.chain_first))
    right = (factor.second, chain_key(factor.chain_second))
    antisymmetric = kind in policy.antisymmetric
    if left == right:
        if antisymmetric and factor.exponent % 2 == 1:
            return factor, 0
        return factor, 1
    if right < left:
        sign = -1 if antisymmetric and factor.exponent % 2 == 1 else 1
        return factor.swapped(), sign
    return factor, 1


def _point_maps(points: FrozenSet[Point]) -> List[Dict[str, str]]:
    groups: Dict[str, List[str]] = {}
    for point in points:
        if point.integrated:
            groups.setdefault(point.test_label, []).append(point.label)  # type: ignore[arg-type]
    ordered = [sorted(groups[label]) for label in sorted(groups)]
    reserved: List[List[str]] = []
    counter = 1
    for group in ordered:
        reserved.append([f"{RESERVED_PREFIX}{counter + offset}" for offset in range(len(group))])
        counter += len(group)
    maps: List[Dict[str, str]] = []
    for choice in product(*(permutations(group) for group in ordered)):
        mapping: Dict[str, str] = {}
        for group_perm, names in zip(choice, reserved):
            mapping.update(zip(group_perm, names))
        maps.append(mapping)
    return maps


def _dummy_name(position: int) -> str:
    return f"{RESERVED_PREFIX}i{position}"


def _first_appearance_map(
    factors: Sequence[Factor], dummies: Sequence[str], policy: Optional[CanonicalPolicy]
) -> Dict[str, str]:
    masked_name = f"{RESERVED_PREFIX}i?"
    masked = frozenset({masked_name})
    keyed = []
    for factor in factors:
        hidden = map_indices(factor, lambda index: Index(masked_name) if index.name in dummies else index)
        normalized, _ = _normalize_factor(hidden, masked, policy)
        keyed.append((normalized.key(), factor))
    keyed.sort(key=lambda item: item[0])
    mapping: Dict[str, str] = {}
    for _, factor in keyed:
        for index in factor.indices():
            if index.name in dummies and index.name not in mapping:
                mapping[index.name] = _dummy_name(len(mapping) + 1)
    return mapping


def _index_maps(dummies: Sequence[str]) -> Optional[List[Dict[str, str]]]:
    if len(dummies) > BRUTE_FORCE_DUMMIES:
        return None
    names = [_dummy_name(position) for position in range(1, len(dummies) + 1)]
    return [dict(zip(perm, names)) for perm in permutations(dummies)]


def _assign_positions(factors: Sequence[Factor], dummies: FrozenSet[str]) -> Tuple[Factor, ...]:
    seen: Dict[str, int] = {}

    def place(index: Index) -> Index:
        if index.name not in dummies:
            return index
        count = seen.get(index.name, 0)
        seen[index.name] = count + 1
        return Index(index.name, up=count == 1)

    return tuple(map_indices(factor, place) for factor in factors)


@lru_cache(maxsize=131072)
def _canonical_shape(
    factors: Tuple[Factor, ...], points: FrozenSet[Point], dummies: Tuple[str, ...], policy: Optional[CanonicalPolicy]
) -> Optional[Tuple[Tuple[Factor, ...], FrozenSet[Point], int]]:
    used = {label for factor in factors for label, _ in factor.slots()}
    points = frozenset(point for point in points if point.integrated or point.label in used)
    index_maps = _index_maps(dummies)
    renamed_dummies = frozenset(_dummy_name(position) for position in range(1, len(dummies) + 1))

    best_key: Optional[tuple] = None
    best_factors: Tuple[Factor, ...] = ()
    best_map: Dict[str, str] = {}
    signs = set()
    for point_map in _point_maps(points):
        moved = [rename_factor(factor, point_map, {}) for factor in factors]
        candidates = index_maps if index_maps is not None else [_first_appearance_map(moved, dummies, policy)]
        for index_map in candidates:
            sign = 1
            normalized: List[Factor] = []
            for factor in moved:
                result, factor_sign = _normalize_factor(rename_factor(factor, {}, index_map), renamed_dummies, policy)
                if factor_sign == 0:
                    return None
                sign *= factor_sign
                normalized.append(result)
            normalized.sort(key=lambda f: f.key())
            key = tuple(f.key() for f in normalized)
            if best_key is None or key < best_key:
                best_key, best_factors, best_map, signs = key, tuple(normalized), point_map, {sign}
            elif key == best_key:
                signs.add(sign)
    if len(signs) > 1:
        return None
    renamed_points = frozenset(Point(best_map.get(point.label, point.label), point.test_label) for point in points)
    sign = signs.pop() if signs else 1
    return _assign_positions(best_factors, renamed_dummies), renamed_points, sign


def canonical_monomial(monomial: Monomial, policy: Optional[CanonicalPolicy] = None) -> Optional[Monomial]:
    """Return the canonical representative, or None when the monomial vanishes."""

    if monomial.coeff.is_zero:
        return None
    factors = merge_factors(monomial.factors)
    merged = replace(monomial, factors=factors) if factors != monomial.factors else monomial
    shape = _canonical_shape(factors, merged.points, merged.dummy_indices(), policy)
    if shape is None:
        return None
    new_factors, new_points, sign = shape
    coeff = monomial.coeff if sign == 1 else -monomial.coeff
    return Monomial(coeff=coeff, factors=new_factors, points=new_points, lam=monomial.lam, hbar=monomial.hbar)


def monomial_key(monomial: Monomial) -> tuple:
    """Merge key of a canonical monomial (everything except the coefficient)."""

    return (
        monomial.lam,
        monomial.hbar,
        tuple(factor.key() for factor in monomial.factors),
        tuple(sorted((point.label, point.test_label or "") for point in monomial.points)),
    )
