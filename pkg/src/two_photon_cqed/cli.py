"""Command-line front end: ``simulate``, ``sweep``, ``optimize`` and ``validate``.

Reports go to stdout (or ``--out``); logs go to stderr. Exit codes: 0 success,
1 invalid configuration, 2 computation error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError
from structlog.contextvars import bound_contextvars

from two_photon_cqed import __version__
from two_photon_cqed.config import (
    RunConfig,
    build_config,
    load_config_file,
    parse_bounds,
    parse_curve,
    parse_grid,
)
from two_photon_cqed.logging import configure_logging, get_logger
from two_photon_cqed.metrics import fidelity_no_detection, fidelity_post_selected
from two_photon_cqed.optimizer import SweepRecord, optimize_times, sweep
from two_photon_cqed.protocol import branch_probabilities, evolve
from two_photon_cqed.serialization import (
    json_safe,
    record_to_dict,
    render_json,
    render_sweep_csv,
    render_sweep_json,
    render_text_report,
    write_output,
)
from two_photon_cqed.types import (
    AtomLevel,
    ConfigError,
    DomainError,
    EmptyBranchError,
    NoFeasiblePointError,
    Objective,
    RunScoredEvent,
)
from two_photon_cqed.validation import run_validation

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_COMPUTATION = 2
EXIT_VALIDATION = 3

# cited lifetime of the cavity field, seconds
CAVITY_DECOHERENCE_TIME = 0.1
MICROSECOND = 1e-6


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON run configuration")
    parser.add_argument("--preset", choices=("epr", "w"), help="protocol preset")
    for name in ("t1", "t2", "t3"):
        parser.add_argument(f"--{name}", type=float, metavar="US", help=f"fixed {name} in μs")
    parser.add_argument(
        "--grid", action="append", default=[], metavar="VAR=START:STOP:POINTS",
        help="sweep grid for one time variable (repeatable)",
    )
    parser.add_argument(
        "--curve", action="append", default=[], metavar="VAR=US[,VAR=US]",
        help="fixed times combined with the grids (repeatable)",
    )
    parser.add_argument(
        "--bounds", action="append", default=[], metavar="VAR=LOW:HIGH",
        help="optimization interval for one time variable (repeatable)",
    )
    parser.add_argument(
        "--no-detection", action="store_true",
        help="score the field without measuring the atom",
    )
    parser.add_argument("--convention", choices=("angular", "cyclic"))
    parser.add_argument("--min-probability", type=float, metavar="P")
    parser.add_argument("--coarse-points", type=int, metavar="N")
    parser.add_argument("--figure", help="figure preset for sweep")
    parser.add_argument("--out", type=Path, help="output path (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="two-photon-cqed",
        description="Two-photon cavity-QED entanglement protocols: simulate, sweep, optimize.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level", default="WARNING",
        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
    )
    parser.add_argument("--log-json", action="store_true", help="JSON log lines on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("simulate", "run one protocol at fixed times"),
        ("sweep", "evaluate a grid of times and emit CSV/JSON"),
        ("optimize", "search the best times within bounds"),
    ):
        _add_run_options(commands.add_parser(name, help=text))

    validate = commands.add_parser("validate", help="run the invariant and oracle checks")
    validate.add_argument("--seed", type=int, default=0)
    validate.add_argument("--out", type=Path, help="also write the JSON report here")
    validate.add_argument("--perturb-propagator", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge ``--config`` with the flags (flags win) and validate."""
    file_data = load_config_file(args.config) if args.config is not None else {}
    overrides: dict[str, Any] = {}
    if args.preset is not None:
        overrides["preset"] = args.preset
    times = {name: getattr(args, name) for name in ("t1", "t2", "t3") if getattr(args, name) is not None}
    if times:
        overrides["times"] = times
    if args.grid:
        overrides["grids"] = dict(parse_grid(item) for item in args.grid)
    if args.curve:
        overrides["curves"] = [parse_curve(item) for item in args.curve]
    if args.bounds:
        overrides["bounds"] = dict(parse_bounds(item) for item in args.bounds)
    if args.no_detection:
        overrides["objective"] = Objective.FIDELITY_NO_DETECTION.value
    if args.convention is not None:
        overrides["params"] = {"convention": args.convention}
    for key in ("min_probability", "coarse_points", "figure", "format"):
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    if args.out is not None:
        overrides["out"] = str(args.out)
    return build_config(file_data, overrides)


def _timing(total_us: float) -> dict[str, float]:
    total_s = total_us * MICROSECOND
    return {
        "total_time_us": total_us,
        "total_time_s": total_s,
        "decoherence_time_s": CAVITY_DECOHERENCE_TIME,
        "decoherence_ratio": total_s / CAVITY_DECOHERENCE_TIME,
    }


def cmd_simulate(config: RunConfig) -> tuple[dict[str, Any], int]:
    """Fidelity, probability and timing at fixed times.

    An empty detection branch is flagged in the report and yields exit code 2.
    """
    missing = [name for name in config.time_variables if name not in config.times]
    if missing:
        raise ConfigError(f"simulate needs a fixed time for {', '.join(missing)}")
    spec = config.protocol_spec()
    target = config.target_state()
    state = evolve(spec)
    detect = spec.detection or AtomLevel.G

    branch_empty = False
    try:
        fidelity, probability = fidelity_post_selected(state, detect, target)
    except EmptyBranchError as exc:
        logger.warning("branch_empty", level=exc.level.value, probability=exc.probability)
        fidelity, probability, branch_empty = math.nan, exc.probability, True

    report: dict[str, Any] = {
        "protocol": spec.name,
        "convention": spec.params.convention.value,
        "times_us": dict(zip(spec.time_variables, spec.durations)),
        "detection": detect.value,
        "probability": probability,
        "fidelity": fidelity,
        "fidelity_no_detection": fidelity_no_detection(state, target),
        "branch_probabilities": {
            level.value: value for level, value in branch_probabilities(state).items()
        },
        "branch_empty": branch_empty,
        **_timing(spec.total_time),
    }
    if config.objective is Objective.FIDELITY_NO_DETECTION:
        report["objective"] = config.objective.value
    return report, EXIT_COMPUTATION if branch_empty and config.objective is Objective.FIDELITY else EXIT_OK


async def _log_progress(event: RunScoredEvent) -> None:
    logger.debug(
        "run_scored",
        run_id=event.run_id,
        fidelity=event.fidelity,
        probability=event.probability,
        branch_empty=event.branch_empty,
    )


def cmd_sweep(config: RunConfig) -> list[SweepRecord]:
    """Every grid point (for every curve), sorted lexicographically by times."""
    if not config.grids and not config.curves:
        raise ConfigError("sweep needs at least one --grid or --curve")
    template = config.protocol_spec()
    target = config.target_state()
    grids = config.grid_values()

    records: list[SweepRecord] = []
    for curve in config.curves or [{}]:
        layer = {**grids, **{name: [value] for name, value in curve.items()}}
        records.extend(sweep(template, layer, config.objective, target, _log_progress).records)
    return sorted(records, key=lambda record: record.times)


def cmd_optimize(config: RunConfig) -> dict[str, Any]:
    if not config.bounds:
        raise ConfigError("optimize needs at least one --bounds")
    template = config.protocol_spec()
    result = optimize_times(
        template,
        {name: (low, high) for name, (low, high) in config.bounds.items()},
        config.target_state(),
        config.objective,
        config.min_probability,
        config.coarse_points,
    )
    best = result.best
    return {
        "protocol": template.name,
        "convention": template.params.convention.value,
        **record_to_dict(best, result.variables, result.objective),
        "min_probability": result.min_probability,
        "evaluations": result.evaluations,
        "refinement_rounds": len(result.history) - 1,
        **_timing(sum(best.times)),
    }


def cmd_validate(seed: int = 0, perturbation: float = 0.0) -> tuple[dict[str, Any], str, int]:
    report = run_validation(seed=seed, perturbation=perturbation)
    return report.as_dict(), report.render(), EXIT_OK if report.passed else EXIT_VALIDATION


def _emit_record(config: RunConfig, report: dict[str, Any]) -> None:
    """Human report on stdout; the machine-readable record to ``--out`` if given."""
    sys.stdout.write(render_text_report(report))
    if config.out is None:
        return
    document = {"config": config.effective(), **report}
    write_output(render_json(json_safe(document)), config.out)


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "validate":
        document, text, code = cmd_validate(args.seed, args.perturb_propagator)
        sys.stdout.write(text)
        if args.out is not None:
            write_output(render_json(json_safe(document)), args.out)
        return code

    config = config_from_args(args)
    if args.command == "simulate":
        report, code = cmd_simulate(config)
        _emit_record(config, report)
        return code
    if args.command == "optimize":
        _emit_record(config, cmd_optimize(config))
        return EXIT_OK

    records = cmd_sweep(config)
    variables = config.time_variables
    render = render_sweep_json if config.format == "json" else render_sweep_csv
    write_output(render(records, variables, config.objective, json_safe(config.effective())), config.out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(json_output=args.log_json, level=args.log_level)

    with bound_contextvars(command=args.command):
        try:
            return _dispatch(args)
        except (ValidationError, ConfigError, DomainError) as exc:
            logger.error("invalid_config", error=str(exc))
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except (EmptyBranchError, NoFeasiblePointError) as exc:
            logger.error("computation_failed", error=str(exc))
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_COMPUTATION
        except OSError as exc:
            logger.error("output_failed", error=str(exc))
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
