"""Report rendering: machine-readable JSON and rich text tables."""

from __future__ import annotations

import io
import json
from collections.abc import Sequence
from enum import Enum
from fractions import Fraction
from typing import Any

from rich import box
from rich.console import Console
from rich.table import Table

from .corpus import CorpusMetrics
from .exceptions import GraphFormatError
from .models import ConfusionMatrix, FraudFinding, FraudReport, FraudType
from .utg.codec import DocumentReader as _R

_REPORT_WIDTH = 100


class ReportFormat(Enum):
    JSON = "json"
    TEXT = "text"


def format_percent(value: Fraction | None) -> str:
    """``Fraction(46, 49)`` → ``"93.88%"``; ``None`` → ``"n/a"``."""
    if value is None:
        return "n/a"
    hundredths = round(value * 10000)
    return f"{hundredths // 100}.{hundredths % 100:02d}%"


def _fraction(value: Fraction | None) -> str | None:
    return None if value is None else f"{value.numerator}/{value.denominator}"


# ----------------------------------------------------------------------
# JSON
# ----------------------------------------------------------------------


def finding_to_json(finding: FraudFinding) -> dict[str, Any]:
    return {
        "type": finding.type.value,
        "states": list(finding.state_ids),
        "views": list(finding.view_ids),
        "evidence": dict(sorted(finding.evidence.items())),
        "message": finding.message,
    }


def report_to_json(report: FraudReport) -> dict[str, Any]:
    return {
        "package": report.package,
        "fraudulent": report.fraudulent,
        "findings": [finding_to_json(f) for f in report.findings],
        "config_hash": report.config_hash,
        "analyzed": report.analyzed,
    }


def _matrix_to_json(matrix: ConfusionMatrix) -> dict[str, Any]:
    return {
        "tp": matrix.tp,
        "fp": matrix.fp,
        "tn": matrix.tn,
        "fn": matrix.fn,
        "precision": _fraction(matrix.precision),
        "recall": _fraction(matrix.recall),
    }


def metrics_to_json(metrics: CorpusMetrics) -> dict[str, Any]:
    """Metrics as JSON; wall-clock timings are left out so runs compare byte-for-byte."""
    return {
        **_matrix_to_json(metrics.apps),
        "analyzed": metrics.analyzed,
        "prefiltered": metrics.prefiltered,
        "failed": metrics.failed,
        "unlabeled": metrics.unlabeled,
        "per_type": {
            fraud.value: {"tp": counts.tp, "fn": counts.fn}
            for fraud, counts in metrics.per_type.items()
        },
        "per_network": dict(metrics.per_network),
        "views": _matrix_to_json(metrics.views),
        "mean_events": metrics.mean_events,
        "mean_explore_seconds": metrics.mean_explore_seconds,
        "errors": [
            {
                "package": e.package,
                "outcome": e.outcome,
                "mechanisms": list(e.mechanisms),
                "message": e.message,
            }
            for e in metrics.errors
        ],
    }


def _evidence_from_json(value: Any, path: str) -> dict[str, float | int | str]:
    evidence: dict[str, float | int | str] = {}
    if not isinstance(value, dict):
        raise GraphFormatError("expected an object", path=path)
    for key, item in value.items():
        if isinstance(item, bool) or not isinstance(item, (int, float, str)):
            raise GraphFormatError("expected a number or a string", path=f"{path}.{key}")
        evidence[key] = item
    return evidence


def _finding_from_json(value: Any, path: str, config_hash: str) -> FraudFinding:
    doc = _R.obj(value, path, ("type", "states", "views"), ("message", "evidence"))
    return FraudFinding(
        type=_R.enum(FraudType, doc["type"], f"{path}.type"),
        state_ids=_R.strings(doc["states"], f"{path}.states"),
        view_ids=_R.strings(doc["views"], f"{path}.views"),
        message=_R.string(doc.get("message", ""), f"{path}.message"),
        evidence=_evidence_from_json(doc.get("evidence", {}), f"{path}.evidence"),
        rule_config_hash=config_hash,
    )


def report_from_json(value: Any, path: str = "$") -> FraudReport:
    """Parse one report object back into a :class:`FraudReport`."""
    doc = _R.obj(
        value, path, ("package", "findings"), ("fraudulent", "config_hash", "analyzed")
    )
    config_hash = _R.string(doc.get("config_hash", ""), f"{path}.config_hash")
    return FraudReport(
        package=_R.string(doc["package"], f"{path}.package"),
        findings=tuple(
            _R.items(
                doc["findings"],
                f"{path}.findings",
                lambda item, p: _finding_from_json(item, p, config_hash),
            )
        ),
        config_hash=config_hash,
        analyzed=_R.boolean(doc.get("analyzed", True), f"{path}.analyzed"),
    )


def _dump(doc: Any) -> bytes:
    return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode("utf-8")


# ----------------------------------------------------------------------
# Text
# ----------------------------------------------------------------------


def _findings_table(report: FraudReport) -> Table:
    verdict = "[bold red]fraudulent[/]" if report.fraudulent else "[green]clean[/]"
    if not report.analyzed:
        verdict = "[dim]skipped by prefilter[/]"
    table = Table(
        box=box.ROUNDED,
        border_style="bright_blue",
        title=f"{report.package}: {verdict}",
        title_style="bold",
    )
    table.add_column("Fraud", style="bold")
    table.add_column("States")
    table.add_column("Views")
    table.add_column("Evidence", style="dim")
    for finding in report.findings:
        table.add_row(
            finding.type.value,
            ", ".join(finding.state_ids),
            ", ".join(finding.view_ids),
            finding.message,
        )
    return table


def _matrix_table(title: str, matrix: ConfusionMatrix) -> Table:
    table = Table(box=box.ROUNDED, border_style="bright_blue", title=title, title_style="bold")
    table.add_column("")
    table.add_column("Labelled fraud", justify="right")
    table.add_column("Labelled clean", justify="right")
    table.add_row("Detected fraud", str(matrix.tp), str(matrix.fp))
    table.add_row("Detected clean", str(matrix.fn), str(matrix.tn))
    return table


def _per_type_table(metrics: CorpusMetrics) -> Table:
    table = Table(box=box.ROUNDED, border_style="bright_blue", title="per fraud type")
    table.add_column("Fraud", style="bold")
    table.add_column("TP", justify="right")
    table.add_column("FN", justify="right")
    table.add_column("Recall", justify="right")
    for fraud, counts in metrics.per_type.items():
        table.add_row(fraud.value, str(counts.tp), str(counts.fn), format_percent(counts.recall))
    return table


def _render_metrics(console: Console, metrics: CorpusMetrics, *, brief: bool) -> None:
    console.print(
        f"{metrics.analyzed} analyzed, {metrics.prefiltered} prefiltered, "
        f"{metrics.failed} failed, {metrics.unlabeled} unlabeled"
    )
    console.print(_matrix_table("apps", metrics.apps))
    console.print(
        f"precision {format_percent(metrics.precision)}  recall {format_percent(metrics.recall)}"
    )
    if brief:
        return
    if metrics.views.total:
        console.print(_matrix_table("ad views", metrics.views))
        console.print(
            f"precision {format_percent(metrics.views.precision)}  "
            f"recall {format_percent(metrics.views.recall)}"
        )
    if metrics.per_type:
        console.print(_per_type_table(metrics))
    if metrics.per_network:
        networks = Table(box=box.ROUNDED, border_style="bright_blue", title="fraudulent apps per ad network")
        networks.add_column("Network", style="bold")
        networks.add_column("Apps", justify="right")
        for network, count in metrics.per_network.items():
            networks.add_row(network, str(count))
        console.print(networks)
    if metrics.errors:
        errors = Table(box=box.ROUNDED, border_style="red", title="errors")
        errors.add_column("Package", style="bold")
        errors.add_column("Outcome")
        errors.add_column("Mechanisms")
        errors.add_column("Message", style="dim")
        for entry in metrics.errors:
            errors.add_row(entry.package, entry.outcome, ", ".join(entry.mechanisms), entry.message)
        console.print(errors)
    console.print(
        f"mean per app: {metrics.mean_events:.1f} events, "
        f"{metrics.mean_explore_seconds:.1f}s exploring (virtual), "
        f"{metrics.mean_detect_ms:.1f}ms detecting"
    )


def render_text(
    reports: Sequence[FraudReport],
    metrics: CorpusMetrics | None = None,
    *,
    metrics_only: bool = False,
) -> str:
    buffer = io.StringIO()
    console = Console(
        file=buffer, width=_REPORT_WIDTH, no_color=True, highlight=False, emoji=False
    )
    if not metrics_only:
        for report in reports:
            if report.findings or not report.analyzed or metrics is None:
                console.print(_findings_table(report))
    if metrics is not None:
        _render_metrics(console, metrics, brief=metrics_only)
    elif not reports:
        console.print("0 analyzed")
    return buffer.getvalue()


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------


def emit_report(
    reports: Sequence[FraudReport],
    metrics: CorpusMetrics | None = None,
    fmt: ReportFormat = ReportFormat.JSON,
    *,
    metrics_only: bool = False,
) -> bytes:
    """Render reports (and corpus metrics) as UTF-8 bytes.

    JSON: a single report object when exactly one report is given without
    metrics, otherwise ``{"apps": [...], "metrics": {...} | null}``.
    """
    if fmt is ReportFormat.TEXT:
        return render_text(reports, metrics, metrics_only=metrics_only).encode("utf-8")
    if metrics is None and len(reports) == 1:
        return _dump(report_to_json(reports[0]))
    doc: dict[str, Any] = {}
    if not metrics_only:
        doc["apps"] = [report_to_json(r) for r in reports]
    doc["metrics"] = metrics_to_json(metrics) if metrics is not None else None
    return _dump(doc)
