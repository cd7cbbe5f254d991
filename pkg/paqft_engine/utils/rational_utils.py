"""Exact-number parsing for user-supplied parameters."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Tuple, Union

import sympy


SYMBOLIC = "symbolic"

Parameter = Union[str, sympy.Rational]


def to_rational(value: Any) -> sympy.Rational:
    """Convert ints, Fractions and strings like '1/4' or '0.25' to an exact rational.

    Floats are rejected; decimal strings are read exactly.
    """

    if isinstance(value, bool):
        raise TypeError("Booleans are not numeric parameters")
    if isinstance(value, sympy.Rational):
        return value
    if isinstance(value, int):
        return sympy.Integer(value)
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError(f"Floating-point parameter rejected: {value!r}; pass a string such as '1/4'")
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("Empty numeric parameter")
        fraction = Fraction(text)
        return sympy.Rational(fraction.numerator, fraction.denominator)
    raise TypeError(f"Unsupported value type for rational conversion: {type(value)!r}")


def parse_parameter(value: Any) -> Parameter:
    """Return SYMBOLIC or an exact rational."""

    if isinstance(value, str) and value.strip().lower() == SYMBOLIC:
        return SYMBOLIC
    return to_rational(value)


def parse_range(text: str) -> Tuple[int, ...]:
    """Parse '1..4' or '1,2,5' into a tuple of integers."""

    text = text.strip()
    if ".." in text:
        low, high = text.split("..", 1)
        start, stop = int(low), int(high)
        if stop < start:
            raise ValueError(f"Empty range: {text!r}")
        return tuple(range(start, stop + 1))
    values = tuple(int(part) for part in text.split(",") if part.strip())
    if not values:
        raise ValueError(f"Empty range: {text!r}")
    return values
