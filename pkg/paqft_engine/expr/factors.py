"""Factor variants of a monomial: fields, kernels, geometric tensors and test functions.

Derivative decorations are stored as a chain in application order (innermost first).
A chain item is either an `Index` (one covariant derivative) or the marker `P0`
(the Klein-Gordon operator), which may only sit innermost. A box operator is a
contracted index pair inside a chain.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, Mapping, Optional, Tuple, Union

from .errors import StructuralError


P0 = "P0"


@dataclass(frozen=True)
class Index:
    name: str
    up: bool = False

    def __post_init__(self) -> None:
        if not self.name:
            raise StructuralError("Index label must be non-empty")

    def renamed(self, index_map: Mapping[str, str]) -> "Index":
        return Index(index_map.get(self.name, self.name), self.up)

    def flipped(self) -> "Index":
        return Index(self.name, not self.up)

    def key(self) -> Tuple[str, int]:
        return (self.name, int(self.up))


ChainItem = Union[Index, str]
Chain = Tuple[ChainItem, ...]


def validate_chain(chain: Chain) -> Chain:
    chain = tuple(chain)
    for position, item in enumerate(chain):
        if item == P0:
            if position != 0:
                raise StructuralError("P0 may only be applied innermost in a derivative chain")
        elif not isinstance(item, Index):
            raise StructuralError(f"Invalid derivative chain item: {item!r}")
    return chain


def chain_key(chain: Chain) -> Tuple[Tuple[str, str, int], ...]:
    return tuple(("", P0, 0) if item == P0 else ("i",) + item.key() for item in chain)  # type: ignore[union-attr]


def chain_indices(chain: Chain) -> Tuple[Index, ...]:
    return tuple(item for item in chain if isinstance(item, Index))


def rename_chain(chain: Chain, index_map: Mapping[str, str]) -> Chain:
    return tuple(item.renamed(index_map) if isinstance(item, Index) else item for item in chain)


class KernelKind(str, Enum):
    H = "H"
    HF = "HF"
    HAF = "HAF"
    DELTA = "Delta"
    DELTA_A = "DeltaA"
    DELTA_R = "DeltaR"
    DIRAC = "DiracDelta"
    W = "W"
    ZERO = "Zero"


GEOM_ARITY: Dict[str, int] = {
    "metric": 2,
    "inverse_metric": 2,
    "einstein": 2,
    "ricci": 2,
    "ricci_scalar": 0,
    "weyl": 4,
    "v1": 0,
}

METRIC_TENSORS = frozenset({"metric", "inverse_metric"})


def _check_exponent(exponent: int) -> None:
    if not isinstance(exponent, int) or exponent < 1:
        raise StructuralError(f"Factor exponent must be a positive integer, got {exponent!r}")


@dataclass(frozen=True)
class Field:
    point: str
    chain: Chain = ()
    exponent: int = 1

    ORDER = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "chain", validate_chain(self.chain))
        _check_exponent(self.exponent)

    def slots(self) -> Tuple[Tuple[str, Chain], ...]:
        return ((self.point, self.chain),)

    def with_slot(self, slot: int, point: Optional[str] = None, chain: Optional[Chain] = None) -> "Field":
        return replace(self, point=self.point if point is None else point, chain=self.chain if chain is None else chain)

    def is_scalar(self) -> bool:
        return True

    def indices(self) -> Tuple[Index, ...]:
        return chain_indices(self.chain)

    def key(self) -> tuple:
        return (self.ORDER, self.point, chain_key(self.chain), self.exponent)


@dataclass(frozen=True)
class Kernel:
    kind: KernelKind
    first: str
    second: str
    chain_first: Chain = ()
    chain_second: Chain = ()
    exponent: int = 1

    ORDER = 1

    def __post_init__(self) -> None:
        kind = KernelKind(self.kind)
        if kind is KernelKind.ZERO:
            raise StructuralError("The zero kernel never appears as a factor")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "chain_first", validate_chain(self.chain_first))
        object.__setattr__(self, "chain_second", validate_chain(self.chain_second))
        _check_exponent(self.exponent)

    def slots(self) -> Tuple[Tuple[str, Chain], ...]:
        return ((self.first, self.chain_first), (self.second, self.chain_second))

    def with_slot(self, slot: int, point: Optional[str] = None, chain: Optional[Chain] = None) -> "Kernel":
        if slot == 0:
            return replace(
                self,
                first=self.first if point is None else point,
                chain_first=self.chain_first if chain is None else chain,
            )
        return replace(
            self,
            second=self.second if point is None else point,
            chain_second=self.chain_second if chain is None else chain,
        )

    def swapped(self) -> "Kernel":
        return replace(
            self,
            first=self.second,
            second=self.first,
            chain_first=self.chain_second,
            chain_second=self.chain_first,
        )

    def is_scalar(self) -> bool:
        return True

    def indices(self) -> Tuple[Index, ...]:
        return chain_indices(self.chain_first) + chain_indices(self.chain_second)

    def key(self) -> tuple:
        return (
            self.ORDER,
            self.kind.value,
            self.first,
            self.second,
            chain_key(self.chain_first),
            chain_key(self.chain_second),
            self.exponent,
        )


@dataclass(frozen=True)
class Geom:
    tensor: str
    tensor_indices: Tuple[Index, ...]
    point: str
    chain: Chain = ()
    exponent: int = 1

    ORDER = 2

    def __post_init__(self) -> None:
        arity = GEOM_ARITY.get(self.tensor)
        if arity is None:
            raise StructuralError(f"Unknown geometric tensor {self.tensor!r}")
        indices = tuple(self.tensor_indices)
        if len(indices) != arity:
            raise StructuralError(f"Tensor {self.tensor!r} takes {arity} indices, got {len(indices)}")
        if self.tensor == "inverse_metric":
            # stored as the metric with raised slots
            object.__setattr__(self, "tensor", "metric")
            indices = tuple(Index(index.name, True) for index in indices)
        object.__setattr__(self, "tensor_indices", indices)
        object.__setattr__(self, "chain", validate_chain(self.chain))
        if P0 in self.chain:
            raise StructuralError("P0 cannot act on a geometric tensor")
        _check_exponent(self.exponent)
        if self.exponent > 1 and indices:
            raise StructuralError("Only scalar geometric factors may carry an exponent")

    def slots(self) -> Tuple[Tuple[str, Chain], ...]:
        return ((self.point, self.chain),)

    def with_slot(self, slot: int, point: Optional[str] = None, chain: Optional[Chain] = None) -> "Geom":
        return replace(self, point=self.point if point is None else point, chain=self.chain if chain is None else chain)

    def is_scalar(self) -> bool:
        return not self.tensor_indices

    @property
    def is_metric(self) -> bool:
        return self.tensor in METRIC_TENSORS

    def indices(self) -> Tuple[Index, ...]:
        return self.tensor_indices + chain_indices(self.chain)

    def key(self) -> tuple:
        return (
            self.ORDER,
            self.tensor,
            self.point,
            tuple(index.key() for index in self.tensor_indices),
            chain_key(self.chain),
            self.exponent,
        )


@dataclass(frozen=True)
class TestFn:
    label: str
    point: str
    chain: Chain = ()
    exponent: int = 1

    ORDER = 3
    __test__ = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "chain", validate_chain(self.chain))
        if P0 in self.chain:
            raise StructuralError("P0 cannot act on a test function")
        _check_exponent(self.exponent)

    def slots(self) -> Tuple[Tuple[str, Chain], ...]:
        return ((self.point, self.chain),)

    def with_slot(self, slot: int, point: Optional[str] = None, chain: Optional[Chain] = None) -> "TestFn":
        return replace(self, point=self.point if point is None else point, chain=self.chain if chain is None else chain)

    def is_scalar(self) -> bool:
        return True

    def indices(self) -> Tuple[Index, ...]:
        return chain_indices(self.chain)

    def key(self) -> tuple:
        return (self.ORDER, self.label, self.point, chain_key(self.chain), self.exponent)


Factor = Union[Field, Kernel, Geom, TestFn]


def factor_points(factor: Factor) -> Tuple[str, ...]:
    return tuple(point for point, _ in factor.slots())


def with_exponent(factor: Factor, exponent: int) -> Factor:
    return replace(factor, exponent=exponent)


def base_key(factor: Factor) -> tuple:
    return factor.key()[:-1]


def rename_factor(factor: Factor, point_map: Mapping[str, str], index_map: Mapping[str, str]) -> Factor:
    renamed: Factor = factor
    for slot, (point, chain) in enumerate(factor.slots()):
        renamed = renamed.with_slot(slot, point_map.get(point, point), rename_chain(chain, index_map))
    if isinstance(renamed, Geom) and renamed.tensor_indices:
        renamed = replace(renamed, tensor_indices=tuple(index.renamed(index_map) for index in renamed.tensor_indices))
    return renamed


def map_indices(factor: Factor, fn) -> Factor:
    """Apply `fn(Index) -> Index` to every index occurrence of the factor."""

    mapped: Factor = factor
    for slot, (point, chain) in enumerate(factor.slots()):
        mapped = mapped.with_slot(slot, chain=tuple(fn(item) if isinstance(item, Index) else item for item in chain))
    if isinstance(mapped, Geom) and mapped.tensor_indices:
        mapped = replace(mapped, tensor_indices=tuple(fn(index) for index in mapped.tensor_indices))
    return mapped
