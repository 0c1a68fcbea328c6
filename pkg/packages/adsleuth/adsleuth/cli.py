"""Command-line interface for adsleuth.

Usage:
    adsleuth detect app.json [--format text]      # UTG or app model
    adsleuth explore model.json --strategy random --out utg.json
    adsleuth bench generate --out bench/
    adsleuth bench run bench/ --faults 0.05 0.05 --workers 8

Exit codes: 0 no fraud, 1 fraud found, 2 usage or config error,
3 corpus run with per-app failures.
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from pathlib import Path

from .config import AdFeatureConfig, RuleConfig
from .corpus import DEFAULT_WORKERS, RunSettings, async_run_corpus, load_document
from .exceptions import AdSleuthError
from .report import ReportFormat, emit_report
from .rules import check_all, tag_state_kinds
from .sim.explorer import ExplorationConfig, Explorer, Strategy
from .sim.faults import FaultConfig
from .sim.generator import generate_benchmark
from .sim.model import AppModel, load_model, write_benchmark
from .utg.codec import serialize

_LOGGER = logging.getLogger(__name__)

EXIT_CLEAN = 0
EXIT_FRAUD = 1
EXIT_USAGE = 2
EXIT_FAILURES = 3


# ── Parser ───────────────────────────────────────────────────────────────


def _common(default: object = False) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--verbose", "-v", action="store_true", default=default, help="Enable debug logging"
    )
    return common


def _detection_options() -> argparse.ArgumentParser:
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument("--ad-config", type=Path, help="AdFeatureConfig JSON file")
    options.add_argument("--rule-config", type=Path, help="RuleConfig JSON file")
    options.add_argument(
        "--format",
        choices=[f.value for f in ReportFormat],
        default=ReportFormat.JSON.value,
        help="Report format (default: json)",
    )
    return options


def _exploration_options() -> argparse.ArgumentParser:
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument(
        "--strategy",
        choices=[s.value for s in Strategy],
        default=Strategy.AD_FIRST.value,
        help="Exploration strategy (default: ad_first)",
    )
    options.add_argument("--budget", type=int, default=200, help="Event budget (default: 200)")
    options.add_argument("--seed", type=int, default=0, help="Exploration seed (default: 0)")
    return options


def build_parser() -> argparse.ArgumentParser:
    # Subcommands must not reset a -v given before them.
    common = _common(argparse.SUPPRESS)
    parser = argparse.ArgumentParser(
        prog="adsleuth",
        description="Detect mobile ad fraud in UI state transition graphs.",
        parents=[_common()],
    )
    commands = parser.add_subparsers(dest="command", required=True)

    detect = commands.add_parser(
        "detect",
        parents=[common, _detection_options()],
        help="Check one UTG (or app model) for ad fraud",
    )
    detect.add_argument("file", type=Path, help="UTG or app model JSON")
    detect.add_argument(
        "--tag-kinds",
        action="store_true",
        help="Tag content states from activity-name keywords first",
    )

    explore = commands.add_parser(
        "explore",
        parents=[common, _exploration_options()],
        help="Explore an app model into a UTG",
    )
    explore.add_argument("model", type=Path, help="App model JSON")
    explore.add_argument("--out", type=Path, help="Write the UTG here instead of stdout")

    bench = commands.add_parser("bench", parents=[common], help="Benchmark corpora")
    bench_commands = bench.add_subparsers(dest="bench_command", required=True)

    generate = bench_commands.add_parser(
        "generate", parents=[common], help="Generate a labelled benchmark"
    )
    generate.add_argument("--fraud", type=int, default=50, help="Fraudulent apps (default: 50)")
    generate.add_argument("--clean", type=int, default=50, help="Clean apps (default: 50)")
    generate.add_argument("--seed", type=int, default=1, help="Generator seed (default: 1)")
    generate.add_argument("--out", type=Path, required=True, help="Output directory")

    run = bench_commands.add_parser(
        "run",
        parents=[common, _detection_options(), _exploration_options()],
        help="Run detection over a corpus directory",
    )
    run.add_argument("directory", type=Path, help="Directory of app models or UTGs")
    run.add_argument(
        "--faults",
        nargs=2,
        type=float,
        metavar=("LOAD_FAILURE", "INHERITED"),
        help="Fault injection rates, each within [0, 1]",
    )
    run.add_argument("--fault-seed", type=int, default=0, help="Fault seed (default: 0)")
    run.add_argument(
        "--workers",
        type=int,
        default=DEFAULT_WORKERS,
        help=f"Apps analyzed concurrently (default: {DEFAULT_WORKERS})",
    )
    run.add_argument(
        "--metrics-only", action="store_true", help="Print the confusion matrix only"
    )
    return parser


# ── Commands ─────────────────────────────────────────────────────────────


def _write(data: bytes, out: Path | None = None) -> None:
    if out is not None:
        out.write_bytes(data)
        return
    sys.stdout.write(data.decode("utf-8"))
    sys.stdout.flush()


def _configs(args: argparse.Namespace) -> tuple[AdFeatureConfig, RuleConfig]:
    ad_cfg = AdFeatureConfig.load(args.ad_config) if args.ad_config else AdFeatureConfig()
    rule_cfg = RuleConfig.load(args.rule_config) if args.rule_config else RuleConfig()
    return ad_cfg, rule_cfg


def _exploration(args: argparse.Namespace) -> ExplorationConfig:
    return ExplorationConfig(
        strategy=Strategy(args.strategy), event_budget=args.budget, seed=args.seed
    )


def cmd_detect(args: argparse.Namespace) -> int:
    ad_cfg, rule_cfg = _configs(args)
    try:
        doc = load_document(args.file.read_bytes())
    except OSError as err:
        raise AdSleuthError(f"Cannot read {args.file}: {err}") from err
    graph = Explorer(doc).run() if isinstance(doc, AppModel) else doc
    if args.tag_kinds:
        graph = tag_state_kinds(graph)
    report = check_all(graph, ad_cfg, rule_cfg)
    _write(emit_report([report], fmt=ReportFormat(args.format)))
    return EXIT_FRAUD if report.fraudulent else EXIT_CLEAN


def cmd_explore(args: argparse.Namespace) -> int:
    try:
        app = load_model(args.model.read_bytes())
    except OSError as err:
        raise AdSleuthError(f"Cannot read {args.model}: {err}") from err
    explorer = Explorer(app, _exploration(args))
    graph = explorer.run()
    _LOGGER.info(
        "%s: %d state(s) with %d event(s)",
        app.package,
        len(graph.states),
        explorer.events_fired,
    )
    _write(serialize(graph), args.out)
    return EXIT_CLEAN


def cmd_generate(args: argparse.Namespace) -> int:
    models = generate_benchmark(args.fraud, args.clean, seed=args.seed)
    out = write_benchmark(models, args.out)
    print(f"Wrote {len(models)} app model(s) to {out}")
    return EXIT_CLEAN


async def cmd_run(args: argparse.Namespace) -> int:
    ad_cfg, rule_cfg = _configs(args)
    fault_cfg = None
    if args.faults is not None:
        fault_cfg = FaultConfig(
            ad_load_failure_rate=args.faults[0],
            inherited_ad_rate=args.faults[1],
            seed=args.fault_seed,
        )
    settings = RunSettings(
        ad_cfg=ad_cfg,
        rule_cfg=rule_cfg,
        explore_cfg=_exploration(args),
        fault_cfg=fault_cfg,
    )
    run = await async_run_corpus(args.directory, settings, workers=args.workers)
    _write(
        emit_report(
            run.reports,
            run.metrics,
            ReportFormat(args.format),
            metrics_only=args.metrics_only,
        )
    )
    if run.metrics.failed:
        return EXIT_FAILURES
    return EXIT_FRAUD if any(r.fraudulent for r in run.reports) else EXIT_CLEAN


# ── Main ─────────────────────────────────────────────────────────────────


async def async_main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.WARNING,
        format="%(asctime)s %(levelname)-8s %(name)s: %(message)s",
    )
    if args.verbose:
        logging.getLogger("adsleuth").setLevel(logging.DEBUG)

    try:
        if args.command == "detect":
            return cmd_detect(args)
        if args.command == "explore":
            return cmd_explore(args)
        if args.bench_command == "generate":
            return cmd_generate(args)
        return await cmd_run(args)
    except AdSleuthError as err:
        print(f"Error: {err}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    return asyncio.run(async_main(argv))


if __name__ == "__main__":
    raise SystemExit(main())
