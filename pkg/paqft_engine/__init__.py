"""Symbolic perturbative algebraic QFT engine for scalar stress-energy checks."""
