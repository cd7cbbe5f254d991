"""Deterministic JSON encoding of symbolic expressions."""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List

import sympy

from .coeff import CoeffElem
from .expression import SymExpr
from .factors import P0, Chain, Factor, Field, Geom, Kernel, TestFn
from .monomial import Monomial


_PRIMITIVE_TYPES = (str, int, float, bool)


def _normalize(value: Any) -> Any:
    if value is None or isinstance(value, _PRIMITIVE_TYPES):
        return value
    if isinstance(value, CoeffElem):
        return str(value)
    if isinstance(value, sympy.Basic):
        return sympy.sstr(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Enum):
        return _normalize(value.value)
    if isinstance(value, SymExpr):
        return expr_to_dict(value)
    if isinstance(value, dict):
        return {str(key): _normalize(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted((_normalize(item) for item in value), key=lambda item: json.dumps(item, sort_keys=True))
    if is_dataclass(value):
        return _normalize(asdict(value))
    return str(value)


def normalize(value: Any) -> Any:
    """Public helper turning engine values into JSON-compatible data."""
    return _normalize(value)


def _chain_to_list(chain: Chain) -> List[Any]:
    return ["P0" if item == P0 else {"index": item.name, "up": item.up} for item in chain]  # type: ignore[union-attr]


def factor_to_dict(factor: Factor) -> Dict[str, Any]:
    if isinstance(factor, Field):
        return {"type": "Field", "point": factor.point, "chain": _chain_to_list(factor.chain), "exponent": factor.exponent}
    if isinstance(factor, Kernel):
        return {
            "type": "Kernel",
            "kind": factor.kind.value,
            "points": [factor.first, factor.second],
            "chains": [_chain_to_list(factor.chain_first), _chain_to_list(factor.chain_second)],
            "exponent": factor.exponent,
        }
    if isinstance(factor, Geom):
        return {
            "type": "Geom",
            "tensor": factor.tensor,
            "indices": [{"index": index.name, "up": index.up} for index in factor.tensor_indices],
            "point": factor.point,
            "chain": _chain_to_list(factor.chain),
            "exponent": factor.exponent,
        }
    if isinstance(factor, TestFn):
        return {
            "type": "TestFn",
            "label": factor.label,
            "point": factor.point,
            "chain": _chain_to_list(factor.chain),
            "exponent": factor.exponent,
        }
    raise TypeError(f"Unsupported factor type: {type(factor)!r}")


def monomial_to_dict(monomial: Monomial) -> Dict[str, Any]:
    return {
        "coeff": str(monomial.coeff),
        "lambda": monomial.lam,
        "hbar": monomial.hbar,
        "factors": [factor_to_dict(factor) for factor in monomial.factors],
        "points": [
            {"label": point.label, "binding": "free" if point.test_label is None else point.test_label}
            for point in sorted(monomial.points, key=lambda p: p.label)
        ],
    }


def expr_to_dict(expr: SymExpr) -> Dict[str, Any]:
    return {"truncation": expr.truncation, "monomials": [monomial_to_dict(m) for m in expr.monomials]}


def dumps(value: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""

    return json.dumps(_normalize(value), sort_keys=True, ensure_ascii=False, indent=2) + "\n"
