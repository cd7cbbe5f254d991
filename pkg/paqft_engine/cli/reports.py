"""Report assembly for the command-line driver: canonical JSON and standalone LaTeX."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from ..expr.expression import SymExpr
from ..expr.latex import expr_tex, standalone_document
from ..expr.serialize import dumps, expr_to_dict, normalize
from ..microlocal.scaling import ScalingRow
from ..stress_energy.pipelines import ConservationCheck
from ..stress_energy.spec import SETSpec
from ..stress_energy.targets import TargetComparison


SCHEMA_VERSION = 1


@dataclass
class Report:
    """One command's output: JSON payload, LaTeX sections and the identity verdict."""

    command: str
    identity_holds: bool
    payload: Dict[str, Any] = field(default_factory=dict)
    sections: List[Tuple[str, str]] = field(default_factory=list)
    failing_terms: Optional[SymExpr] = None


def _by_order(expr: SymExpr) -> Dict[str, Any]:
    return {str(order): expr_to_dict(part) for order, part in sorted(expr.by_lambda().items())}


def expand_report(
    name: str, spec: SETSpec, order: int, expansion: SymExpr, vev: SymExpr
) -> Report:
    payload = {
        "functional": name,
        "order": order,
        "spec": spec.describe(),
        "bogoliubov": _by_order(expansion),
        "interacting_vev": _by_order(vev),
        "vev_vanishes": vev.is_zero,
    }
    sections = [
        (f"Bogoliubov map of {name}", expr_tex(expansion)),
        (f"Interacting expectation value of {name}", expr_tex(vev)),
    ]
    return Report("expand", True, payload, sections)


def conservation_report(check: ConservationCheck) -> Report:
    payload: Dict[str, Any] = {
        "spec": check.spec.describe(),
        "residual": _by_order(check.residual),
        "eta_solution": check.eta_solution,
        "residual_at_solution": None if check.residual_at_solution is None else _by_order(check.residual_at_solution),
        "note": check.note,
        "conserved": check.conserved,
    }
    sections = [("Divergence residual", expr_tex(check.residual))]
    if check.eta_solution is not None:
        sections.append(("Conservation fixes eta", rf"\eta = {sympy.latex(check.eta_solution)}"))
    failing = check.residual_at_solution if check.residual_at_solution is not None else check.residual
    return Report("conserve", check.conserved, payload, sections, None if check.conserved else failing)


def trace_report(spec: SETSpec, comparison: TargetComparison) -> Report:
    payload = {
        "spec": spec.describe(),
        "derived": _by_order(comparison.derived),
        "target": _by_order(comparison.target),
        "difference": _by_order(comparison.difference),
        "discrepancies": comparison.discrepancies(),
        "matches": comparison.matches,
    }
    sections = [
        ("Derived trace", expr_tex(comparison.derived)),
        ("Transcribed target", expr_tex(comparison.target)),
        ("Derived minus target", expr_tex(comparison.difference)),
    ]
    return Report("trace", comparison.matches, payload, sections, None if comparison.matches else comparison.difference)


def _row_tex(row: ScalingRow) -> str:
    return rf"k = {row.k}:\ \operatorname{{sd}} = {sympy.latex(row.scaling_degree)},\ \rho = {sympy.latex(row.degree_of_divergence)}"


def scaling_report(dimension: int, rows: Sequence[ScalingRow]) -> Report:
    payload = {
        "dimension": dimension,
        "rows": [normalize(row) for row in rows],
        "suspected_sign_typo": True,
    }
    body = r" \\ ".join(_row_tex(row) for row in rows)
    return Report("scaling", True, payload, [(f"Scaling degrees of Feynman powers in d = {dimension}", body)])


def render_json(report: Report, runtime: Dict[str, float]) -> str:
    document = {
        "schema_version": SCHEMA_VERSION,
        "command": report.command,
        "identity_holds": report.identity_holds,
        "result": report.payload,
        "runtime": runtime,
    }
    return dumps(document)


def render_latex(report: Report, standalone: bool = True) -> str:
    if standalone:
        return standalone_document(report.sections)
    return "\n\n".join(f"% {title}\n{body}" for title, body in report.sections) + "\n"
