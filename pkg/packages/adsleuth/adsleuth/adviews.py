"""Ad-view detection from string, type and placement features.

A state is considered only when ad-load calls were traced while it was
shown (or, optionally, when it carries ad views inherited over a scroll).
Among its leaf views, candidates come from the string or type feature and
are confirmed by placement, which also decides the ad kind. A view of a
customized (non-framework) class is a candidate only as a popup, that is
when placed as an interstitial or full-screen ad.
"""

from __future__ import annotations

import logging
import re

from .config import AdFeatureConfig
from .models import (
    AdKind,
    ConfusionMatrix,
    DetectedAd,
    Screen,
    UIState,
    UTGraph,
    ViewNode,
)
from .utg.geometry import area_ratio, clamp, leaf_views

_LOGGER = logging.getLogger(__name__)

_DEFAULT_CONFIG = AdFeatureConfig()
_POPUP_KINDS = frozenset({AdKind.INTERSTITIAL, AdKind.FULL_SCREEN})
_DELIMITERS_RE = re.compile(r"[._\-:/$\s\d]+")
_CAMEL_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+")


def identifier_tokens(text: str) -> list[str]:
    """Split an identifier on delimiters, digits and case boundaries (lowercased)."""
    tokens: list[str] = []
    for chunk in _DELIMITERS_RE.split(text):
        tokens.extend(t.lower() for t in _CAMEL_RE.findall(chunk))
    return tokens


def string_feature(view: ViewNode, cfg: AdFeatureConfig = _DEFAULT_CONFIG) -> bool:
    """True when an identifier token hints "ad" and is not a whitelisted word."""
    for source in (view.class_name, view.resource_id):
        for token in identifier_tokens(source):
            if "ad" in token and token not in cfg.whitelist:
                return True
    return False


def type_feature(view: ViewNode, cfg: AdFeatureConfig = _DEFAULT_CONFIG) -> bool:
    """True when the final class-name segment is one of the ad-hosting types."""
    if not view.class_name:
        return False
    simple = re.split(r"[.$]", view.class_name)[-1]
    return any(simple.endswith(suffix) for suffix in cfg.ad_type_classes)


def custom_type_feature(view: ViewNode, cfg: AdFeatureConfig = _DEFAULT_CONFIG) -> bool:
    """True for a fully qualified class outside the platform packages."""
    name = view.class_name
    if "." not in name:
        return False
    return not any(name.startswith(prefix) for prefix in cfg.framework_packages)


def _within(value: float, interval: tuple[float, float]) -> bool:
    return interval[0] <= value <= interval[1]


def placement_feature(
    view: ViewNode,
    screen: Screen,
    cfg: AdFeatureConfig = _DEFAULT_CONFIG,
) -> AdKind | None:
    """Classify a view's size and position; None when it fits no ad layout.

    Precedence: full-screen, then interstitial (horizontally centred), then
    banner (at the top or bottom edge).
    """
    bounds = clamp(view.bounds, screen)
    if bounds.area == 0:
        return None
    ratio = area_ratio(bounds, screen)

    if _within(ratio, cfg.full_ratio):
        return AdKind.FULL_SCREEN

    if _within(ratio, cfg.interstitial_ratio):
        center_x = (bounds.left + bounds.right) / 2
        if abs(center_x - screen.width / 2) <= cfg.center_tolerance * screen.width:
            return AdKind.INTERSTITIAL

    if _within(ratio, cfg.banner_ratio):
        band = cfg.edge_band * screen.height
        if bounds.top <= band or bounds.bottom >= screen.height - band:
            return AdKind.BANNER

    return None


def looks_like_ad(view: ViewNode, cfg: AdFeatureConfig = _DEFAULT_CONFIG) -> bool:
    """Candidate test shared with the explorer's view ordering."""
    return string_feature(view, cfg) or type_feature(view, cfg)


def has_ad_load_trace(state: UIState, cfg: AdFeatureConfig = _DEFAULT_CONFIG) -> bool:
    """True when a traced method starts with a configured ad-load signature."""
    return any(
        trace.startswith(prefix)
        for trace in state.ad_load_traces
        for prefix in cfg.ad_load_signatures
    )


def is_ad_relevant(state: UIState, cfg: AdFeatureConfig = _DEFAULT_CONFIG) -> bool:
    if has_ad_load_trace(state, cfg):
        return True
    return cfg.follow_inherited_ads and bool(state.inherited_ad_views)


def detect_ad_views(
    state: UIState,
    screen: Screen,
    cfg: AdFeatureConfig = _DEFAULT_CONFIG,
) -> list[DetectedAd]:
    """Ad views of a state, top-most first."""
    if not is_ad_relevant(state, cfg):
        return []
    detected: list[DetectedAd] = []
    for view in leaf_views(state):
        kind = placement_feature(view, screen, cfg)
        if kind is None:
            continue
        if looks_like_ad(view, cfg) or (
            kind in _POPUP_KINDS and custom_type_feature(view, cfg)
        ):
            detected.append(DetectedAd(view.id, kind))
    return detected


def annotate(
    graph: UTGraph,
    cfg: AdFeatureConfig = _DEFAULT_CONFIG,
) -> dict[str, tuple[DetectedAd, ...]]:
    """Run the detector over every state of a graph."""
    detections = {
        state.id: tuple(detect_ad_views(state, graph.screen, cfg))
        for state in graph.states.values()
    }
    _LOGGER.debug(
        "%s: %d ad view(s) in %d state(s)",
        graph.app.package,
        sum(len(ads) for ads in detections.values()),
        sum(1 for ads in detections.values() if ads),
    )
    return detections


def score_ad_views(
    graph: UTGraph,
    detections: dict[str, tuple[DetectedAd, ...]],
) -> ConfusionMatrix:
    """View-level confusion counts against the labelled rendered ad views.

    Every leaf view of every state is one sample. Graphs without a label
    score as all-negative ground truth.
    """
    label = graph.app.label
    truth = label.ad_views if label is not None else {}
    tp = fp = tn = fn = 0
    for state in graph.states.values():
        actual = set(truth.get(state.id, ()))
        predicted = {ad.view_id for ad in detections.get(state.id, ())}
        for view in leaf_views(state):
            if view.id in predicted:
                if view.id in actual:
                    tp += 1
                else:
                    fp += 1
            elif view.id in actual:
                fn += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)
