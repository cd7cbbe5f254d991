"""Command-line driver: expand, conserve, trace and scaling reports."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from logging import Logger
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import sympy
from dotenv import load_dotenv

from ..config.loader import load_config
from ..config.schema import Config
from ..expr.factors import Index
from ..functional.builders import derivative_quadratic, smeared_field, smeared_power
from ..functional.core import Functional, vacuum_eval
from ..logging_utils.logger import configure_logging, get_logger, log_term_dump, log_with_context
from ..microlocal.scaling import scaling_table
from ..monitoring.metrics import MetricsRecorder
from ..perturbation.smatrix import bogoliubov, interacting_vev
from ..rewrite.background import parse_background
from ..rewrite.rules import RewriteError, UnknownRuleError
from ..stress_energy.build import build_set
from ..stress_energy.pipelines import check_conservation, trace_order2
from ..stress_energy.spec import SETSpec
from ..stress_energy.targets import compare, trace_target
from ..utils.rational_utils import SYMBOLIC, parse_range
from .reports import Report, conservation_report, expand_report, render_json, render_latex, scaling_report, trace_report


EXIT_OK = 0
EXIT_RESIDUAL = 1
EXIT_USAGE = 2

FUNCTIONALS = ("phi", "phi2", "phik", "dphi-dphi", "set")
CONFORMAL_XI = sympy.Rational(1, 6)
FREE_TRACE_ETA = sympy.Rational(1, 3)


class UsageError(ValueError):
    """Raised when command-line arguments are inconsistent."""


@dataclass
class CliContext:
    config: Config
    metrics: MetricsRecorder
    logger: Logger


def build_context(config_path: Optional[str] = None) -> CliContext:
    config = load_config(config_path)
    logger = configure_logging(config.logging)
    logger.debug("Logging configured")
    return CliContext(config=config, metrics=MetricsRecorder(), logger=logger)


def _interaction_arg(value: str) -> Optional[int]:
    if value.strip().lower() in {"none", "free"}:
        return None
    try:
        return int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid interaction power: {value!r}") from exc


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="YAML configuration file")
    common.add_argument("--format", choices=("json", "latex"), default=None)
    common.add_argument("--output", default=None, help="Report file; stdout when omitted")
    common.add_argument("--n", dest="interaction", type=_interaction_arg, default=argparse.SUPPRESS)
    common.add_argument("--background", default=None)
    common.add_argument("--convention", default=None)
    common.add_argument("--potential-sign", dest="potential_sign", default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="paqft_engine", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    expand = commands.add_parser("expand", parents=[common], help="Bogoliubov map and interacting vev")
    expand.add_argument("--functional", choices=FUNCTIONALS, required=True)
    expand.add_argument("--k", type=int, default=None, help="Power for --functional phik")
    expand.add_argument("--order", type=int, default=None)

    for name, summary in (("conserve", "Divergence of the stress-energy tensor"), ("trace", "Trace of the stress-energy tensor")):
        command = commands.add_parser(name, parents=[common], help=summary)
        command.add_argument("--eta", default=None)
        command.add_argument("--xi", default=None)

    scaling = commands.add_parser("scaling", parents=[common], help="Scaling degrees of Feynman powers")
    scaling.add_argument("--d", type=int, default=None)
    scaling.add_argument("--k", default="1..4")
    return parser


def spec_from_args(args: argparse.Namespace, config: Config) -> SETSpec:
    """Flags override the loaded configuration; bad values raise UsageError."""

    physics = config.physics
    try:
        background = parse_background(args.background or physics.background, args.convention or physics.convention)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    overrides: Dict[str, Any] = {"background": background}
    if hasattr(args, "interaction"):
        overrides["interaction"] = args.interaction
    for key in ("eta", "xi", "potential_sign"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    try:
        return SETSpec.from_config(config, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _expansion_functional(args: argparse.Namespace, spec: SETSpec, order: int) -> Functional:
    if args.functional == "phi":
        return smeared_field(truncation=order)
    if args.functional == "phi2":
        return smeared_power(2, truncation=order)
    if args.functional == "phik":
        if args.k is None or args.k < 1:
            raise UsageError("--functional phik needs --k >= 1")
        return smeared_power(args.k, truncation=order)
    if args.functional == "dphi-dphi":
        return derivative_quadratic((Index("mu"),), (Index("mu", True),), truncation=order)
    return build_set(spec, order)


def run_expand(args: argparse.Namespace, context: CliContext) -> Report:
    spec = spec_from_args(args, context.config)
    order = args.order if args.order is not None else context.config.engine.truncation_order
    if order < 0:
        raise UsageError("--order must be non-negative")
    F = _expansion_functional(args, spec, order)
    V = spec.interaction_spec
    if V is None:
        expansion, vev = F.body, vacuum_eval(F)
    else:
        expansion, vev = bogoliubov(F, V, order).body, interacting_vev(F, V, order)
    log_with_context(
        context.logger,
        logging.INFO,
        "Expansion computed",
        functional=args.functional,
        order=order,
        terms=len(expansion),
        vev_terms=len(vev),
    )
    return expand_report(args.functional, spec, order, expansion, vev)


def run_conserve(args: argparse.Namespace, context: CliContext) -> Report:
    spec = spec_from_args(args, context.config)
    return conservation_report(check_conservation(spec, context.metrics))


def trace_defaults(spec: SETSpec) -> SETSpec:
    """Fix a symbolic η at its conserving value and a symbolic ξ at conformal coupling."""

    overrides: Dict[str, Any] = {}
    if spec.eta == SYMBOLIC:
        overrides["eta"] = FREE_TRACE_ETA if spec.interaction is None else sympy.Rational(1, spec.interaction)
    if spec.xi == SYMBOLIC:
        overrides["xi"] = CONFORMAL_XI
    return replace(spec, **overrides)


def run_trace(args: argparse.Namespace, context: CliContext) -> Report:
    spec = trace_defaults(spec_from_args(args, context.config))
    derived = trace_order2(spec, context.metrics, context.config.engine.max_rewrite_passes)
    return trace_report(spec, compare(derived, trace_target(spec)))


def run_scaling(args: argparse.Namespace, context: CliContext) -> Report:
    dimension = args.d if args.d is not None else context.config.engine.dimension
    try:
        ks = parse_range(args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return scaling_report(dimension, scaling_table(dimension, ks))


COMMANDS = {
    "expand": run_expand,
    "conserve": run_conserve,
    "trace": run_trace,
    "scaling": run_scaling,
}


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")


def render(report: Report, context: CliContext, fmt: str) -> str:
    if fmt == "latex":
        return render_latex(report, context.config.output.standalone_latex)
    runtime = context.metrics.snapshot(include_durations=context.config.monitoring.enable_metrics)
    return render_json(report, runtime)


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        context = build_context(args.config)
    except (FileNotFoundError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        report = COMMANDS[args.command](args, context)
    except (UsageError, UnknownRuleError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RewriteError) as exc:
        # arguments were valid; the computation itself broke down
        print(f"pipeline failure: {exc}", file=sys.stderr)
        log_term_dump(context.logger, "Pipeline failed", [exc], command=args.command, error=type(exc).__name__)
        return EXIT_RESIDUAL

    fmt = args.format or context.config.output.format
    _emit(render(report, context, fmt), args.output or context.config.output.path)

    if not report.identity_holds:
        terms: List[Any] = list(report.failing_terms or ())
        log_term_dump(get_logger(), "Identity check failed", terms, command=report.command)
        return EXIT_RESIDUAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
