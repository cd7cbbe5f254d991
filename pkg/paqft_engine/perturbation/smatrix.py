"""S-matrix, its ⋆-inverse, the Bogoliubov map and interacting expectation values."""

from __future__ import annotations

import logging
from math import factorial
from typing import List, Tuple

import sympy

from ..deformation.products import star
from ..expr.coeff import CoeffElem, I
from ..expr.expression import SymExpr, add
from ..expr.factors import KernelKind
from ..expr.monomial import Monomial
from ..functional.builders import identity
from ..functional.core import Functional, vacuum_eval
from ..logging_utils.logger import get_logger, log_with_context
from .interaction import InteractionSpec


BLOWUP_ORDER = 3


def _series(V: InteractionSpec, order: int, sign: int, kind: KernelKind) -> Functional:
    if order < 0:
        raise ValueError("Perturbative order must be non-negative")
    if order >= BLOWUP_ORDER:
        log_with_context(
            get_logger(),
            logging.WARNING,
            "Perturbative order beyond second order grows combinatorially",
            order=order,
            power=V.power,
        )
    potential = V.potential(order)
    monomials: List[Monomial] = list(identity(order).monomials)
    power = identity(order)
    for k in range(1, order + 1):
        power = star(power, potential, kind)
        prefactor = CoeffElem.of((I * sign) ** k / sympy.Integer(factorial(k)))
        monomials.extend(m.scaled(prefactor, lam=k, hbar=-k) for m in power.monomials)
    return Functional.of(monomials, order)


def smatrix(V: InteractionSpec, order: int) -> Functional:
    """S(λV) = Σ_k (1/k!)(iλ/ℏ)^k V ⋆_F … ⋆_F V."""

    return _series(V, order, 1, KernelKind.HF)


def smatrix_inverse(V: InteractionSpec, order: int) -> Functional:
    """S^{⋆-1}(λV) = Σ_k (1/k!)(-iλ/ℏ)^k V ⋆_AF … ⋆_AF V."""

    return _series(V, order, -1, KernelKind.HAF)


def _split_field_free(F: Functional) -> Tuple[SymExpr, Functional]:
    """The c-number part of F and the remainder carrying fields.

    R_{λV} fixes c-numbers since S^{⋆-1} ⋆_H S = 1, so only the remainder is expanded.
    """

    fields = Functional.of((m for m in F.monomials if m.has_fields()), F.truncation, F.body.policy, F.bound_labels)
    return vacuum_eval(F), fields


def bogoliubov(F: Functional, V: InteractionSpec, order: int) -> Functional:
    """R_{λV}(F) = S^{⋆-1} ⋆_H (S ⋆_F F), truncated at λ^order."""

    constant, fields = _split_field_free(F.with_truncation(order))
    inner = star(smatrix(V, order), fields, KernelKind.HF)
    outer = star(smatrix_inverse(V, order), inner, KernelKind.H)
    return Functional(add(outer.body, constant), outer.bound_labels)


def interacting_vev(F: Functional, V: InteractionSpec, order: int) -> SymExpr:
    """Maximally contracted part of the Bogoliubov map."""

    constant, fields = _split_field_free(F.with_truncation(order))
    inner = star(smatrix(V, order), fields, KernelKind.HF)
    outer = star(smatrix_inverse(V, order), inner, KernelKind.H, vacuum_only=True)
    log_with_context(
        get_logger(),
        logging.DEBUG,
        "Interacting expectation value computed",
        inner_terms=len(inner.monomials),
        vev_terms=len(outer.monomials),
    )
    return add(vacuum_eval(outer), constant)


def unitarity_defect(V: InteractionSpec, order: int) -> Functional:
    """S^{⋆-1} ⋆_H S − 1, before any kernel relation is applied."""

    product = star(smatrix_inverse(V, order), smatrix(V, order), KernelKind.H)
    return product - identity(order)
