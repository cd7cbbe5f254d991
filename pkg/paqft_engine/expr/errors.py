"""Exceptions raised by the expression layer."""

from __future__ import annotations


class StructuralError(ValueError):
    """Raised when a factor, monomial or expression violates its structural invariants."""
