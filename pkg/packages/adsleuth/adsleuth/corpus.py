"""Corpus runs: prefilter, per-app analysis, and confusion-matrix metrics."""

from __future__ import annotations

import asyncio
import json
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .adviews import annotate, score_ad_views
from .config import AdFeatureConfig, RuleConfig
from .const import AD_NETWORKS, PERMISSION_PREFIX, REQUIRED_PERMISSIONS
from .exceptions import AdSleuthError, BenchmarkError
from .models import AppLabel, AppMeta, ConfusionMatrix, FraudReport, FraudType, UTGraph
from .rules import check_all
from .sim.explorer import ExplorationConfig, Explorer
from .sim.faults import FaultConfig, fault_kind, inject_faults
from .sim.model import MANIFEST_NAME, AppModel, benchmark_files, model_from_json
from .utg.codec import DocumentReader, graph_from_json

_LOGGER = logging.getLogger(__name__)

DEFAULT_WORKERS = 4


def prefilter(meta: AppMeta) -> bool:
    """True when the app requests network access and bundles a known ad library."""
    granted = {p.removeprefix(PERMISSION_PREFIX) for p in meta.permissions}
    if not granted.issuperset(REQUIRED_PERMISSIONS):
        return False
    return ad_network_of(meta) is not None


def ad_network_of(meta: AppMeta) -> str | None:
    """Name of the first bundled ad network whose package prefix a library matches."""
    for lib in meta.detected_ad_libs:
        for network, prefixes in AD_NETWORKS.items():
            if any(lib == p or lib.startswith(f"{p}.") for p in prefixes):
                return network
    return None


def load_document(data: bytes | str) -> AppModel | UTGraph:
    """Decode an app model or a UTG, told apart by the model's ``handlers`` key."""
    doc = DocumentReader.parse(data)
    if isinstance(doc, dict) and "handlers" in doc:
        return model_from_json(doc)
    return graph_from_json(doc)


# ----------------------------------------------------------------------
# Results
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class AppResult:
    """Outcome of one corpus entry."""

    package: str
    path: str
    report: FraudReport | None = None  # None when analysis failed
    label: AppLabel | None = None
    network: str | None = None
    faults: tuple[str, ...] = ()
    views: ConfusionMatrix = field(default_factory=ConfusionMatrix)
    events: int = 0
    explore_seconds: float = 0.0  # virtual
    detect_ms: float = 0.0  # wall clock
    error: str | None = None

    @property
    def outcome(self) -> str | None:
        """``tp``/``fp``/``tn``/``fn`` at app level; None without report or label."""
        if self.report is None or self.label is None:
            return None
        predicted = self.report.fraudulent
        actual = self.label.fraudulent
        if predicted:
            return "tp" if actual else "fp"
        return "fn" if actual else "tn"


@dataclass(frozen=True)
class ErrorEntry:
    package: str
    outcome: str  # fp, fn or error
    mechanisms: tuple[str, ...] = ()
    message: str = ""


@dataclass(frozen=True)
class TypeCounts:
    tp: int = 0
    fn: int = 0

    @property
    def recall(self) -> Fraction | None:
        return Fraction(self.tp, self.tp + self.fn) if self.tp + self.fn else None


@dataclass(frozen=True)
class CorpusMetrics:
    apps: ConfusionMatrix = field(default_factory=ConfusionMatrix)
    views: ConfusionMatrix = field(default_factory=ConfusionMatrix)
    per_type: dict[FraudType, TypeCounts] = field(default_factory=dict)
    per_network: dict[str, int] = field(default_factory=dict)
    analyzed: int = 0
    prefiltered: int = 0
    failed: int = 0
    unlabeled: int = 0
    errors: tuple[ErrorEntry, ...] = ()
    mean_events: float = 0.0
    mean_explore_seconds: float = 0.0
    mean_detect_ms: float = 0.0

    @property
    def tp(self) -> int:
        return self.apps.tp

    @property
    def fp(self) -> int:
        return self.apps.fp

    @property
    def tn(self) -> int:
        return self.apps.tn

    @property
    def fn(self) -> int:
        return self.apps.fn

    @property
    def precision(self) -> Fraction | None:
        return self.apps.precision

    @property
    def recall(self) -> Fraction | None:
        return self.apps.recall


@dataclass(frozen=True)
class CorpusRun:
    results: tuple[AppResult, ...]
    metrics: CorpusMetrics

    @property
    def reports(self) -> list[FraudReport]:
        return [r.report for r in self.results if r.report is not None]


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def compute_metrics(results: list[AppResult] | tuple[AppResult, ...]) -> CorpusMetrics:
    """Aggregate app-level and view-level metrics over labelled, processed apps."""
    outcomes: Counter[str] = Counter()
    per_type: dict[FraudType, TypeCounts] = {}
    per_network: Counter[str] = Counter()
    views = ConfusionMatrix()
    errors: list[ErrorEntry] = []
    processed = [r for r in results if r.report is not None]

    for result in results:
        if result.report is None:
            errors.append(ErrorEntry(result.package, "error", message=result.error or ""))
            continue
        if result.report.fraudulent and result.network is not None:
            per_network[result.network] += 1
        outcome = result.outcome
        if outcome is None:
            continue
        outcomes[outcome] += 1
        views = views + result.views
        assert result.label is not None
        for fraud in result.label.frauds:
            counts = per_type.get(fraud, TypeCounts())
            if fraud in result.report.fraud_types:
                per_type[fraud] = TypeCounts(counts.tp + 1, counts.fn)
            else:
                per_type[fraud] = TypeCounts(counts.tp, counts.fn + 1)
        if outcome in ("fp", "fn"):
            mechanisms = tuple(sorted({fault_kind(f) for f in result.faults}))
            errors.append(ErrorEntry(result.package, outcome, mechanisms))

    return CorpusMetrics(
        apps=ConfusionMatrix(
            tp=outcomes["tp"], fp=outcomes["fp"], tn=outcomes["tn"], fn=outcomes["fn"]
        ),
        views=views,
        per_type={f: per_type[f] for f in FraudType if f in per_type},
        per_network=dict(sorted(per_network.items())),
        analyzed=sum(1 for r in processed if r.report is not None and r.report.analyzed),
        prefiltered=sum(1 for r in processed if r.report is not None and not r.report.analyzed),
        failed=len(results) - len(processed),
        unlabeled=sum(1 for r in processed if r.label is None),
        errors=tuple(errors),
        mean_events=_mean([float(r.events) for r in processed]),
        mean_explore_seconds=_mean([r.explore_seconds for r in processed]),
        mean_detect_ms=_mean([r.detect_ms for r in processed]),
    )


# ----------------------------------------------------------------------
# Analysis
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RunSettings:
    ad_cfg: AdFeatureConfig = field(default_factory=AdFeatureConfig)
    rule_cfg: RuleConfig = field(default_factory=RuleConfig)
    explore_cfg: ExplorationConfig = field(default_factory=ExplorationConfig)
    fault_cfg: FaultConfig | None = None


def analyze_document(
    doc: AppModel | UTGraph,
    settings: RunSettings,
    *,
    path: str = "",
    label: AppLabel | None = None,
) -> AppResult:
    """Prefilter, explore (for models), detect and score one app."""
    events = 0
    explore_seconds = 0.0
    faults: tuple[str, ...] = ()
    meta = doc.meta if isinstance(doc, AppModel) else doc.app
    label = meta.label or label
    network = ad_network_of(meta)

    if not prefilter(meta):
        _LOGGER.info("%s: no network permission or known ad library, skipped", meta.package)
        return AppResult(
            package=meta.package,
            path=path,
            report=FraudReport(package=meta.package, analyzed=False),
            label=label,
            network=network,
        )

    if isinstance(doc, AppModel):
        app = inject_faults(doc, settings.fault_cfg) if settings.fault_cfg else doc
        faults = app.faults
        explorer = Explorer(app, settings.explore_cfg)
        graph = explorer.run()
        events, explore_seconds = explorer.events_fired, explorer.elapsed
    else:
        graph = doc

    t0 = time.monotonic()
    ads = annotate(graph, settings.ad_cfg)
    report = check_all(graph, settings.ad_cfg, settings.rule_cfg, ads=ads)
    detect_ms = (time.monotonic() - t0) * 1000
    views = score_ad_views(graph, ads) if label is not None else ConfusionMatrix()
    return AppResult(
        package=meta.package,
        path=path,
        report=report,
        label=label,
        network=network,
        faults=faults,
        views=views,
        events=events,
        explore_seconds=explore_seconds,
        detect_ms=detect_ms,
    )


def analyze_file(
    path: Path,
    settings: RunSettings,
    manifest: dict[str, AppLabel] | None = None,
) -> AppResult:
    """Analyze one corpus file; failures become an error result."""
    try:
        doc = load_document(path.read_bytes())
        package = doc.meta.package if isinstance(doc, AppModel) else doc.app.package
        return analyze_document(
            doc, settings, path=str(path), label=(manifest or {}).get(package)
        )
    except (AdSleuthError, OSError) as err:
        _LOGGER.warning("%s: analysis failed: %s", path.name, err)
        return AppResult(package=path.stem, path=str(path), error=str(err))


def load_manifest(directory: Path) -> dict[str, AppLabel]:
    """Labels from a benchmark manifest; empty when there is none."""
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        return {}
    try:
        doc: Any = json.loads(manifest_path.read_text(encoding="utf-8"))
        return {
            package: AppLabel(
                frauds=tuple(FraudType(f) for f in entry["frauds"]),
                ad_network=entry.get("ad_network"),
            )
            for package, entry in doc.items()
        }
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as err:
        raise BenchmarkError(f"{manifest_path}: unreadable manifest: {err}") from err


async def async_run_corpus(
    directory: str | Path,
    settings: RunSettings | None = None,
    *,
    workers: int = DEFAULT_WORKERS,
) -> CorpusRun:
    """Analyze every model or graph document of a directory concurrently.

    Within one app the analysis is sequential; results are ordered by
    package so the output does not depend on scheduling.

    Raises BenchmarkError when the directory is missing or workers < 1.
    """
    root = Path(directory)
    if not root.is_dir():
        raise BenchmarkError(f"{root} is not a directory")
    if workers < 1:
        raise BenchmarkError(f"workers must be >= 1, got {workers}")
    settings = settings or RunSettings()
    manifest = load_manifest(root)
    files = benchmark_files(root)
    semaphore = asyncio.Semaphore(workers)

    async def _one(path: Path) -> AppResult:
        async with semaphore:
            return await asyncio.to_thread(analyze_file, path, settings, manifest)

    t0 = time.monotonic()
    results = await asyncio.gather(*(_one(path) for path in files))
    ordered = tuple(sorted(results, key=lambda r: (r.package, r.path)))
    metrics = compute_metrics(ordered)
    _LOGGER.info(
        "Corpus %s: %d app(s), %d analyzed, %d prefiltered, %d failed in %.1fs",
        root,
        len(ordered),
        metrics.analyzed,
        metrics.prefiltered,
        metrics.failed,
        time.monotonic() - t0,
    )
    return CorpusRun(results=ordered, metrics=metrics)


def run_corpus(
    directory: str | Path,
    settings: RunSettings | None = None,
    *,
    workers: int = DEFAULT_WORKERS,
) -> CorpusRun:
    """Blocking wrapper around :func:`async_run_corpus`."""
    return asyncio.run(async_run_corpus(directory, settings, workers=workers))
