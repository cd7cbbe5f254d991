"""LaTeX rendering of symbolic expressions for side-by-side inspection."""

from __future__ import annotations

import re
from typing import Iterable, List

from .expression import SymExpr
from .factors import P0, Chain, Factor, Field, Geom, Index, Kernel, KernelKind, TestFn
from .monomial import RESERVED_PREFIX, Monomial


KERNEL_SYMBOLS = {
    KernelKind.H: "H",
    KernelKind.HF: "H_{F}",
    KernelKind.HAF: "H_{AF}",
    KernelKind.DELTA: r"\Delta",
    KernelKind.DELTA_A: r"\Delta_{A}",
    KernelKind.DELTA_R: r"\Delta_{R}",
    KernelKind.DIRAC: r"\delta",
    KernelKind.W: "W",
}

GEOM_SYMBOLS = {
    "metric": "g",
    "einstein": "G",
    "ricci": "R",
    "ricci_scalar": "R",
    "weyl": "C",
    "v1": "v_{1}",
}

_POINT_RE = re.compile(r"^#(\d+)$")
_INDEX_RE = re.compile(r"^#[a-z]+(\d+)$")

GREEK = [r"\alpha", r"\beta", r"\gamma", r"\sigma", r"\tau", r"\kappa", r"\lambda"]


def point_tex(label: str) -> str:
    match = _POINT_RE.match(label)
    if match:
        return f"x_{{{match.group(1)}}}"
    return label.lstrip(RESERVED_PREFIX)


def index_tex(name: str) -> str:
    match = _INDEX_RE.match(name)
    if match:
        position = int(match.group(1)) - 1
        return GREEK[position] if position < len(GREEK) else rf"\rho_{{{position + 1}}}"
    return name


def _index_script(index: Index) -> str:
    return f"^{{{index_tex(index.name)}}}" if index.up else f"_{{{index_tex(index.name)}}}"


def _chain_prefix(chain: Chain, superscript: str = "") -> str:
    parts: List[str] = []
    for item in reversed(chain):
        if item == P0:
            parts.append(f"P_{{0}}{superscript}")
        else:
            parts.append(rf"\nabla{superscript}{_index_script(item)}")  # type: ignore[arg-type]
    return " ".join(parts) + (" " if parts else "")


def _power(body: str, exponent: int) -> str:
    return body if exponent == 1 else f"{body}^{{{exponent}}}"


def factor_tex(factor: Factor) -> str:
    if isinstance(factor, Field):
        body = rf"\phi({point_tex(factor.point)})"
        if factor.chain:
            return _power(f"({_chain_prefix(factor.chain)}{body})", factor.exponent)
        return _power(body, factor.exponent)
    if isinstance(factor, Kernel):
        prefix = _chain_prefix(factor.chain_first, "^{(1)}") + _chain_prefix(factor.chain_second, "^{(2)}")
        body = f"{KERNEL_SYMBOLS[factor.kind]}({point_tex(factor.first)},{point_tex(factor.second)})"
        if prefix:
            return _power(f"({prefix}{body})", factor.exponent)
        return _power(body, factor.exponent)
    if isinstance(factor, Geom):
        scripts = "".join(_index_script(index) for index in factor.tensor_indices)
        body = f"{GEOM_SYMBOLS[factor.tensor]}{scripts}({point_tex(factor.point)})"
        if factor.chain:
            return _power(f"({_chain_prefix(factor.chain)}{body})", factor.exponent)
        return _power(body, factor.exponent)
    if isinstance(factor, TestFn):
        body = f"{factor.label}({point_tex(factor.point)})"
        if factor.chain:
            return _power(f"({_chain_prefix(factor.chain)}{body})", factor.exponent)
        return _power(body, factor.exponent)
    raise TypeError(f"Unsupported factor type: {type(factor)!r}")


def monomial_tex(monomial: Monomial) -> str:
    measure = "".join(
        rf"\int d\mu_{{{point_tex(point.label)}}}\," for point in monomial.integrated_points()
    )
    scalars = []
    if monomial.lam:
        scalars.append(_power(r"\lambda", monomial.lam))
    if monomial.hbar:
        scalars.append(_power(r"\hbar", monomial.hbar))
    coeff = monomial.coeff.latex()
    coeff_tex = "" if coeff == "1" and (scalars or monomial.factors) else f"\\left({coeff}\\right)"
    if coeff == "-1" and (scalars or monomial.factors):
        coeff_tex = "-"
    body = " ".join(scalars + [factor_tex(factor) for factor in monomial.factors])
    return f"{coeff_tex}{measure} {body}".strip()


def expr_tex(expr: SymExpr) -> str:
    if expr.is_zero:
        return "0"
    terms = [monomial_tex(monomial) for monomial in expr.monomials]
    joined = terms[0]
    for term in terms[1:]:
        joined += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return joined


def standalone_document(sections: Iterable[tuple]) -> str:
    """Wrap (title, body) pairs in a compilable document."""

    lines = [
        r"\documentclass{article}",
        r"\usepackage{amsmath,amssymb}",
        r"\allowdisplaybreaks",
        r"\begin{document}",
    ]
    for title, body in sections:
        lines.append(rf"\section*{{{title}}}")
        lines.append(r"\begin{multline*}")
        lines.append(body)
        lines.append(r"\end{multline*}")
    lines.append(r"\end{document}")
    return "\n".join(lines) + "\n"
