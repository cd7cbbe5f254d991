"""S-matrix, Bogoliubov map and interacting expectation values."""

from .interaction import InteractionSpec
from .smatrix import bogoliubov, interacting_vev, smatrix, smatrix_inverse, unitarity_defect

__all__ = ["InteractionSpec", "bogoliubov", "interacting_vev", "smatrix", "smatrix_inverse", "unitarity_defect"]
