"""Points and monomials: coefficient × λ^a ℏ^b × factor multiset over labelled points."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from itertools import count
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from .coeff import CoeffElem, Scalar
from .errors import StructuralError
from .factors import Factor, Field, Index, TestFn, factor_points, rename_factor


RESERVED_PREFIX = "#"


@dataclass(frozen=True)
class Point:
    """A spacetime point; integrated points carry the label of their test function."""

    label: str
    test_label: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.label:
            raise StructuralError("Point label must be non-empty")
        if self.test_label is None and self.label.startswith(RESERVED_PREFIX):
            raise StructuralError(f"Free point labels may not use the reserved prefix: {self.label!r}")

    @property
    def integrated(self) -> bool:
        return self.test_label is not None


def free_point(label: str) -> Point:
    return Point(label)


def integrated_point(label: str, test_label: str) -> Point:
    return Point(label, test_label)


@dataclass(frozen=True)
class Monomial:
    coeff: CoeffElem
    factors: Tuple[Factor, ...] = ()
    points: FrozenSet[Point] = field(default_factory=frozenset)
    lam: int = 0
    hbar: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", CoeffElem.of(self.coeff))
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "points", frozenset(self.points))
        if self.lam < 0:
            raise StructuralError("λ-power must be non-negative")
        self._validate()

    def _validate(self) -> None:
        labels: Dict[str, Point] = {}
        for point in self.points:
            if point.label in labels:
                raise StructuralError(f"Point {point.label!r} declared twice with different bindings")
            labels[point.label] = point
        for factor in self.factors:
            for label in factor_points(factor):
                if label not in labels:
                    raise StructuralError(f"Factor {factor!r} references undeclared point {label!r}")
        for factor in self.factors:
            if factor.exponent > 1 and factor.indices():
                raise StructuralError(f"Factor carrying indices cannot be raised to a power: {factor!r}")
        occurrences = self.index_counts()
        for name, total in occurrences.items():
            if total > 2:
                raise StructuralError(f"Index {name!r} appears {total} times in one monomial")
        for point in self.points:
            if not point.integrated:
                continue
            carriers = [
                factor
                for factor in self.factors
                if isinstance(factor, TestFn)
                and factor.point == point.label
                and factor.label == point.test_label
                and not factor.chain
            ]
            if not carriers:
                raise StructuralError(
                    f"Integrated point {point.label!r} must carry its test function {point.test_label!r}"
                )

    # -- queries -----------------------------------------------------------

    def index_counts(self) -> Counter:
        counts: Counter = Counter()
        for factor in self.factors:
            for index in factor.indices():
                counts[index.name] += factor.exponent
        return counts

    def free_indices(self) -> Tuple[str, ...]:
        return tuple(sorted(name for name, total in self.index_counts().items() if total == 1))

    def dummy_indices(self) -> Tuple[str, ...]:
        return tuple(sorted(name for name, total in self.index_counts().items() if total == 2))

    def index_occurrences(self, name: str) -> List[Tuple[int, Index]]:
        found = []
        for position, factor in enumerate(self.factors):
            for index in factor.indices():
                if index.name == name:
                    found.append((position, index))
        return found

    def point(self, label: str) -> Point:
        for point in self.points:
            if point.label == label:
                return point
        raise KeyError(label)

    def point_labels(self) -> Set[str]:
        return {point.label for point in self.points}

    def integrated_points(self) -> Tuple[Point, ...]:
        return tuple(sorted((point for point in self.points if point.integrated), key=lambda p: (p.test_label, p.label)))

    def field_degree(self) -> int:
        return sum(factor.exponent for factor in self.factors if isinstance(factor, Field))

    def has_fields(self) -> bool:
        return any(isinstance(factor, Field) for factor in self.factors)

    # -- constructors --------------------------------------------------------

    def scaled(self, scalar: Scalar, lam: int = 0, hbar: int = 0) -> "Monomial":
        return replace(self, coeff=self.coeff * scalar, lam=self.lam + lam, hbar=self.hbar + hbar)

    def with_factors(self, factors: Iterable[Factor], points: Optional[Iterable[Point]] = None) -> "Monomial":
        factors = tuple(factors)
        if points is None:
            used = {label for factor in factors for label in factor_points(factor)}
            points = [point for point in self.points if point.label in used or not point.integrated]
        return replace(self, factors=factors, points=frozenset(points))

    def times(self, other: "Monomial") -> "Monomial":
        """Product in a shared point namespace (no renaming)."""

        points: Dict[str, Point] = {point.label: point for point in self.points}
        for point in other.points:
            existing = points.get(point.label)
            if existing is not None and existing != point:
                raise StructuralError(f"Conflicting bindings for point {point.label!r}")
            points[point.label] = point
        return Monomial(
            coeff=self.coeff * other.coeff,
            factors=self.factors + other.factors,
            points=frozenset(points.values()),
            lam=self.lam + other.lam,
            hbar=self.hbar + other.hbar,
        )

    def renamed(self, point_map: Mapping[str, str], index_map: Mapping[str, str]) -> "Monomial":
        points = frozenset(Point(point_map.get(point.label, point.label), point.test_label) for point in self.points)
        factors = tuple(rename_factor(factor, point_map, index_map) for factor in self.factors)
        return replace(self, factors=factors, points=points)

    def renamed_apart(self, avoid_points: Iterable[str], avoid_indices: Iterable[str]) -> "Monomial":
        """Rename integrated points and dummy indices away from the given labels."""

        taken_points = set(avoid_points)
        taken_indices = set(avoid_indices)
        point_map: Dict[str, str] = {}
        counter = count(1)
        for point in self.integrated_points():
            if point.label not in taken_points:
                continue
            candidate = f"{RESERVED_PREFIX}r{next(counter)}"
            while candidate in taken_points or candidate in self.point_labels():
                candidate = f"{RESERVED_PREFIX}r{next(counter)}"
            point_map[point.label] = candidate
            taken_points.add(candidate)
        index_map: Dict[str, str] = {}
        names = set(self.index_counts())
        for name in self.dummy_indices():
            if name not in taken_indices:
                continue
            candidate = f"{RESERVED_PREFIX}j{next(counter)}"
            while candidate in taken_indices or candidate in names:
                candidate = f"{RESERVED_PREFIX}j{next(counter)}"
            index_map[name] = candidate
            taken_indices.add(candidate)
        if not point_map and not index_map:
            return self
        return self.renamed(point_map, index_map)


def fresh_index(monomial: Monomial, stem: str = "s") -> str:
    names = set(monomial.index_counts())
    for number in count(1):
        candidate = f"{RESERVED_PREFIX}{stem}{number}"
        if candidate not in names:
            return candidate
    raise AssertionError("unreachable")
