"""Exact coefficient ring: polynomials in declared scalar symbols over Gaussian rationals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Iterable, Mapping, Optional, Union

import sympy

from .errors import StructuralError


SCALAR_KINDS = frozenset({"mass-squared", "coupling-parameter", "curvature-constant", "numeric-constant"})

M2 = sympy.Symbol("m2")
XI = sympy.Symbol("xi")
ETA = sympy.Symbol("eta")
PI = sympy.pi
I = sympy.I

LATEX_SYMBOL_NAMES = {M2: "m^{2}", XI: r"\xi", ETA: r"\eta"}


@dataclass(frozen=True)
class ScalarSymbol:
    """A named scalar entering coefficients (m², ξ, η, π)."""

    name: str
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in SCALAR_KINDS:
            raise StructuralError(f"Unknown scalar kind {self.kind!r} for symbol {self.name!r}")
        if not self.name.isidentifier():
            raise StructuralError(f"Scalar symbol name must be an identifier: {self.name!r}")


class SymbolTable:
    """Session registry keeping scalar symbol names unique."""

    def __init__(self, symbols: Iterable[ScalarSymbol] = ()):
        self._symbols: Dict[str, ScalarSymbol] = {}
        for symbol in symbols:
            self.declare(symbol.name, symbol.kind)

    def declare(self, name: str, kind: str) -> ScalarSymbol:
        existing = self._symbols.get(name)
        candidate = ScalarSymbol(name, kind)
        if existing is not None and existing != candidate:
            raise StructuralError(f"Scalar symbol {name!r} already declared with kind {existing.kind!r}")
        self._symbols[name] = candidate
        return candidate

    def __getitem__(self, name: str) -> ScalarSymbol:
        return self._symbols[name]

    def __contains__(self, name: object) -> bool:
        return name in self._symbols

    def names(self) -> Iterable[str]:
        return sorted(self._symbols)


def default_symbols() -> SymbolTable:
    return SymbolTable(
        [
            ScalarSymbol("m2", "mass-squared"),
            ScalarSymbol("xi", "coupling-parameter"),
            ScalarSymbol("eta", "coupling-parameter"),
            ScalarSymbol("pi", "numeric-constant"),
        ]
    )


Scalar = Union["CoeffElem", int, sympy.Expr]


def _as_expr(value: Any) -> sympy.Expr:
    if isinstance(value, CoeffElem):
        return value.value
    if isinstance(value, float):
        raise StructuralError(f"Floating-point coefficient rejected: {value!r}")
    return sympy.sympify(value)


@dataclass(frozen=True)
class CoeffElem:
    """Element of the coefficient ring, kept in expanded canonical form.

    Exactness is enforced: any floating-point atom is a structural error.
    """

    value: sympy.Expr = sympy.S.Zero

    def __post_init__(self) -> None:
        expr = sympy.expand(_as_expr(self.value))
        if expr.atoms(sympy.Float):
            raise StructuralError(f"Floating-point coefficient rejected: {expr}")
        object.__setattr__(self, "value", expr)

    @classmethod
    def of(cls, value: Scalar) -> "CoeffElem":
        if isinstance(value, CoeffElem):
            return value
        return cls(_as_expr(value))

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other: Scalar) -> "CoeffElem":
        return CoeffElem(self.value + _as_expr(other))

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "CoeffElem":
        return CoeffElem(self.value - _as_expr(other))

    def __rsub__(self, other: Scalar) -> "CoeffElem":
        return CoeffElem(_as_expr(other) - self.value)

    def __mul__(self, other: Scalar) -> "CoeffElem":
        return CoeffElem(self.value * _as_expr(other))

    __rmul__ = __mul__

    def __neg__(self) -> "CoeffElem":
        return CoeffElem(-self.value)

    def __pow__(self, exponent: int) -> "CoeffElem":
        return CoeffElem(self.value**exponent)

    def conjugate(self) -> "CoeffElem":
        # Declared symbols are real, so conjugation only flips i.
        return CoeffElem(self.value.subs(I, -I))

    def subs(self, mapping: Mapping[sympy.Expr, Any]) -> "CoeffElem":
        return CoeffElem(self.value.subs({key: _as_expr(val) for key, val in mapping.items()}))

    def linear_parts(self, symbol: sympy.Symbol) -> Optional[tuple]:
        """Return (slope, intercept) when the element is affine in `symbol`."""

        slope = self.value.coeff(symbol, 1)
        intercept = self.value.coeff(symbol, 0)
        if sympy.expand(self.value - slope * symbol - intercept) != 0:
            return None
        if slope.has(symbol) or intercept.has(symbol):
            return None
        return slope, intercept

    def free_symbols(self) -> frozenset:
        return frozenset(self.value.free_symbols)

    def key(self) -> str:
        return sympy.srepr(self.value)

    def latex(self) -> str:
        return sympy.latex(self.value, symbol_names=LATEX_SYMBOL_NAMES)

    def __str__(self) -> str:
        return sympy.sstr(self.value)


ZERO = CoeffElem(0)
ONE = CoeffElem(1)
