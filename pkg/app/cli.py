"""
Command-line surface: run, compare, validate and plot
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from app.config import settings
from app.core.exceptions import ControlFault, RobotControlError
from app.core.logging import configure_logging
from app.schemas.results import ComparisonSummary, MetricsSummary
from app.schemas.scenario import ControllerKind, Scenario
from app.services.metrics_service import metrics_service
from app.services.plot_service import plot_service
from app.services.scenario_service import scenario_service
from app.services.simulation_service import SimLog, simulation_service
from app.services.validation_service import validation_service

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _write_json(path: Path, payload: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


def _print_errors(label: str, summary: MetricsSummary) -> None:
    axes = " ".join(f"e{i + 1}={v:.3e}" for i, v in enumerate(summary.tail_max_error))
    print(f"{label}: tail max error {axes} (m)")
    lyap = summary.lyapunov
    if lyap.criterion_met is not None:
        status = "met" if lyap.criterion_met else "missed"
        print(f"{label}: Lyapunov check {status} (max step increase {lyap.max_step_increase:.3e}, "
              f"longest increase run {lyap.longest_increase_run}, bound fraction {lyap.bound_fraction:.3f})")


def _load(args) -> Scenario:
    scenario = scenario_service.load_scenario(args.config)
    if args.seed is not None:
        scenario = scenario.model_copy(update={"seed": args.seed})
    return scenario


def run_and_save(scenario: Scenario, out_dir: Path, stem: str):
    """Run one scenario; write <stem>_<controller>.csv and its metrics file"""
    log = simulation_service.run_scenario(scenario)
    summary = metrics_service.compute_metrics(log)
    base = out_dir / f"{stem}_{scenario.controller.value}"
    log.to_csv(base.with_suffix(".csv"))
    _write_json(Path(f"{base}_metrics.json"), summary.model_dump(mode="json"))
    return log, summary


def cmd_run(args) -> int:
    scenario = _load(args)
    stem = Path(args.config).stem
    _, summary = run_and_save(scenario, Path(args.out), stem)
    _print_errors(scenario.controller.value, summary)
    return EXIT_OK


def cmd_compare(args) -> int:
    scenario = _load(args)
    stem = Path(args.config).stem
    out_dir = Path(args.out)
    logs = {}
    summaries = {}
    for kind in (ControllerKind.ADAPTIVE, ControllerKind.BASELINE):
        variant = scenario.model_copy(update={"controller": kind})
        logs[kind], summaries[kind] = run_and_save(variant, out_dir, stem)
        _print_errors(kind.value, summaries[kind])
    plot_service.comparison_chart(logs[ControllerKind.ADAPTIVE], logs[ControllerKind.BASELINE],
                                  out_dir / f"{stem}_errors.svg")
    comparison = ComparisonSummary(adaptive=summaries[ControllerKind.ADAPTIVE],
                                   baseline=summaries[ControllerKind.BASELINE])
    _write_json(out_dir / f"{stem}_comparison.json", comparison.model_dump(mode="json"))
    print(f"adaptive better per axis: {comparison.adaptive_better}")
    return EXIT_OK


def cmd_validate(args) -> int:
    report = validation_service.run_suite(args.samples, args.seed, broken=args.broken_model)
    for r in report.results:
        relation = ">" if r.name == "min_eigenvalue" else "<="
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.robot:5s} {r.name:26s} {r.residual:.3e} {relation} {r.threshold:.0e}")
    print("all properties passed" if report.passed else "validation failed")
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_plot(args) -> int:
    log = SimLog.from_csv(args.csv)
    for path in plot_service.plot_log(log, Path(args.out), Path(args.csv).stem):
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="robotctl", description="Adaptive control of parallel robots")
    parser.add_argument("--log-level", default=None, help="Log level (default from settings)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run one scenario")
    run.add_argument("config", help="Scenario YAML file")
    run.add_argument("--out", default=settings.output_dir, help="Output directory")
    run.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
    run.set_defaults(handler=cmd_run)

    compare = sub.add_parser("compare", help="Run the adaptive and baseline controllers on one scenario")
    compare.add_argument("config", help="Scenario YAML file")
    compare.add_argument("--out", default=settings.output_dir, help="Output directory")
    compare.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
    compare.set_defaults(handler=cmd_compare)

    validate = sub.add_parser("validate", help="Check the algebraic and structural properties")
    validate.add_argument("--samples", type=int, default=settings.validation_samples, help="Samples per robot")
    validate.add_argument("--seed", type=int, default=settings.validation_seed, help="Sampling seed")
    validate.add_argument("--broken-model", action="store_true", help="Zero the Coriolis matrix (negative control)")
    validate.set_defaults(handler=cmd_validate)

    plot = sub.add_parser("plot", help="Render SVG charts of a run log")
    plot.add_argument("csv", help="Run log CSV")
    plot.add_argument("--out", default=settings.output_dir, help="Output directory")
    plot.set_defaults(handler=cmd_plot)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    configure_logging(args.log_level)
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except ControlFault as e:
        print(f"fault [{e.kind}]: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (RobotControlError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
