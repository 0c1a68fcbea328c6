"""adsleuth: mobile ad fraud detection over UI state transition graphs."""

from __future__ import annotations

import importlib
from typing import TYPE_CHECKING

# Nothing below imports networkx or rich.
from .config import AdFeatureConfig, RuleConfig, config_hash
from .exceptions import (
    AdSleuthError,
    BenchmarkError,
    ConfigError,
    GraphFormatError,
    GraphValidationError,
    TrafficFormatError,
)
from .models import (
    AdKind,
    AppLabel,
    AppMeta,
    Bounds,
    ConfusionMatrix,
    DetectedAd,
    DownloadEvent,
    EventType,
    FraudFinding,
    FraudReport,
    FraudType,
    InputEvent,
    PayloadClass,
    Screen,
    StateKind,
    TrafficRecord,
    Transition,
    UIState,
    UTGraph,
    ViewNode,
    ViewTree,
)

if TYPE_CHECKING:
    from .adviews import annotate as annotate
    from .adviews import detect_ad_views as detect_ad_views
    from .corpus import async_run_corpus as async_run_corpus
    from .corpus import prefilter as prefilter
    from .corpus import run_corpus as run_corpus
    from .report import emit_report as emit_report
    from .rules import check_all as check_all
    from .sim.explorer import explore as explore
    from .sim.generator import generate_benchmark as generate_benchmark
    from .utg.codec import deserialize as deserialize
    from .utg.codec import serialize as serialize
    from .utg.validate import validate as validate

# Pulled in on first access so that ``import adsleuth`` stays free of
# networkx (rules, validation, exploration) and rich (reports).
_LAZY_IMPORTS: dict[str, tuple[str, str]] = {
    "annotate": (".adviews", "annotate"),
    "async_run_corpus": (".corpus", "async_run_corpus"),
    "check_all": (".rules", "check_all"),
    "detect_ad_views": (".adviews", "detect_ad_views"),
    "deserialize": (".utg.codec", "deserialize"),
    "emit_report": (".report", "emit_report"),
    "explore": (".sim.explorer", "explore"),
    "generate_benchmark": (".sim.generator", "generate_benchmark"),
    "prefilter": (".corpus", "prefilter"),
    "run_corpus": (".corpus", "run_corpus"),
    "serialize": (".utg.codec", "serialize"),
    "validate": (".utg.validate", "validate"),
}


def __getattr__(name: str) -> object:
    if name in _LAZY_IMPORTS:
        module_path, attr = _LAZY_IMPORTS[name]
        mod = importlib.import_module(module_path, __name__)
        value = getattr(mod, attr)
        globals()[name] = value
        return value
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__() -> list[str]:
    return __all__


__all__ = [
    "AdFeatureConfig",
    "AdKind",
    "AdSleuthError",
    "AppLabel",
    "AppMeta",
    "BenchmarkError",
    "Bounds",
    "ConfigError",
    "ConfusionMatrix",
    "DetectedAd",
    "DownloadEvent",
    "EventType",
    "FraudFinding",
    "FraudReport",
    "FraudType",
    "GraphFormatError",
    "GraphValidationError",
    "InputEvent",
    "PayloadClass",
    "RuleConfig",
    "Screen",
    "StateKind",
    "TrafficFormatError",
    "TrafficRecord",
    "Transition",
    "UIState",
    "UTGraph",
    "ViewNode",
    "ViewTree",
    "annotate",
    "async_run_corpus",
    "check_all",
    "config_hash",
    "detect_ad_views",
    "deserialize",
    "emit_report",
    "explore",
    "generate_benchmark",
    "prefilter",
    "run_corpus",
    "serialize",
    "validate",
]
