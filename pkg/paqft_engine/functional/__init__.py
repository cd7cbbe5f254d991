"""Polynomial functionals: derivatives, products and vacuum evaluation."""

from .core import Functional, LabelCollisionError, functional_derivative, pointwise_product, vacuum_eval

__all__ = ["Functional", "LabelCollisionError", "functional_derivative", "pointwise_product", "vacuum_eval"]
