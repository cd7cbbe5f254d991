"""Canonical symbolic expression representation for paqft_engine."""

from .canonical import FULL_POLICY, KERNEL_SYMMETRY, CanonicalPolicy, canonical_monomial
from .coeff import ETA, I, M2, PI, XI, CoeffElem, ScalarSymbol, SymbolTable, default_symbols
from .errors import StructuralError
from .expression import SymExpr, add, canonicalize, equal, mul_scalar, negate, sum_exprs
from .factors import P0, Field, Geom, Index, Kernel, KernelKind, TestFn
from .monomial import Monomial, Point, free_point, integrated_point

__all__ = [
    "CanonicalPolicy",
    "CoeffElem",
    "ETA",
    "FULL_POLICY",
    "Field",
    "Geom",
    "I",
    "Index",
    "KERNEL_SYMMETRY",
    "Kernel",
    "KernelKind",
    "M2",
    "Monomial",
    "P0",
    "PI",
    "Point",
    "ScalarSymbol",
    "StructuralError",
    "SymExpr",
    "SymbolTable",
    "TestFn",
    "XI",
    "add",
    "canonical_monomial",
    "canonicalize",
    "default_symbols",
    "equal",
    "free_point",
    "integrated_point",
    "mul_scalar",
    "negate",
    "sum_exprs",
]
