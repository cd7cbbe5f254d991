"""Deformed products, Wick ordering and time ordering."""

from .products import star, time_ordered, wick_order

__all__ = ["star", "time_ordered", "wick_order"]
