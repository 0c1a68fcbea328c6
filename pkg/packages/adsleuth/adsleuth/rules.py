"""Fraud rules over annotated UI state transition graphs.

Four rules judge a single state's layout (hidden, size, number, overlap);
the other five look across transitions, traffic and activities. Every rule
is registered under its FraudType and shares one signature so check_all
can run the enabled subset uniformly.
"""

from __future__ import annotations

import dataclasses
import logging
import re
import time
from collections.abc import Callable, Mapping, Sequence

import networkx as nx

from .adviews import annotate
from .config import AdFeatureConfig, RuleConfig, config_hash
from .const import INTERACTIVE_CLASS_HINTS, KIND_KEYWORDS
from .exceptions import GraphValidationError
from .models import (
    NON_CONTENT_KINDS,
    TOUCH_EVENTS,
    AdKind,
    DetectedAd,
    FraudFinding,
    FraudReport,
    FraudType,
    Screen,
    StateKind,
    UIState,
    UTGraph,
    ViewNode,
)
from .traffic import associate, is_download
from .utg.geometry import area_ratio, clamp, intersection_area, intersects, leaf_views, union_area
from .utg.validate import state_digraph, validate

_LOGGER = logging.getLogger(__name__)

Annotation = Mapping[str, Sequence[DetectedAd]]
RuleFunc = Callable[[UTGraph, Annotation, RuleConfig], list[FraudFinding]]

_DEFAULT_RULES = RuleConfig()
_LARGE_KINDS = frozenset({AdKind.INTERSTITIAL, AdKind.FULL_SCREEN})

_RULES: dict[FraudType, RuleFunc] = {}


def register_rule(fraud_type: FraudType) -> Callable[[RuleFunc], RuleFunc]:
    """Register a graph-level rule function for a fraud type."""

    def decorator(func: RuleFunc) -> RuleFunc:
        _RULES[fraud_type] = func
        return func

    return decorator


def registered_rules() -> dict[FraudType, RuleFunc]:
    return dict(_RULES)


def _ad_nodes(state: UIState, ad_views: Sequence[DetectedAd]) -> list[tuple[DetectedAd, ViewNode]]:
    return [(ad, state.view_tree.nodes[ad.view_id]) for ad in ad_views]


def _content_leaves(state: UIState, ad_views: Sequence[DetectedAd]) -> list[ViewNode]:
    ad_ids = {ad.view_id for ad in ad_views}
    return [view for view in leaf_views(state) if view.id not in ad_ids]


def is_interactive(view: ViewNode) -> bool:
    """Clickable leaf whose class is a button, dialog or similar control."""
    if not (view.is_leaf and view.clickable):
        return False
    simple = re.split(r"[.$]", view.class_name)[-1]
    return any(hint in simple for hint in INTERACTIVE_CLASS_HINTS)


# ----------------------------------------------------------------------
# Static placement rules (one state at a time)
# ----------------------------------------------------------------------


def check_hidden(state: UIState, ad_views: Sequence[DetectedAd]) -> list[FraudFinding]:
    """Ad views covered by a non-ad leaf drawn above them."""
    findings: list[FraudFinding] = []
    content = _content_leaves(state, ad_views)
    for ad, node in _ad_nodes(state, ad_views):
        covering = sorted(
            (w for w in content if w.z > node.z and intersects(node.bounds, w.bounds)),
            key=lambda w: w.id,
        )
        if not covering:
            continue
        findings.append(
            FraudFinding(
                type=FraudType.HIDDEN,
                state_ids=(state.id,),
                view_ids=(ad.view_id, *(w.id for w in covering)),
                message=(
                    f"ad view {ad.view_id} is covered by "
                    f"{', '.join(w.id for w in covering)}"
                ),
                evidence={
                    "covering_views": len(covering),
                    "max_covered_area": max(intersection_area(node.bounds, w.bounds) for w in covering),
                    "ad_z": node.z,
                },
            )
        )
    return findings


def check_size(
    state: UIState,
    ad_views: Sequence[DetectedAd],
    screen: Screen,
    cfg: RuleConfig = _DEFAULT_RULES,
) -> list[FraudFinding]:
    """Ad views whose area ratio falls outside the policy interval of their kind."""
    findings: list[FraudFinding] = []
    for ad, node in _ad_nodes(state, ad_views):
        ratio = area_ratio(node.bounds, screen)
        low, high = cfg.size_interval(ad.kind)
        if low <= ratio <= high:
            continue
        findings.append(
            FraudFinding(
                type=FraudType.SIZE,
                state_ids=(state.id,),
                view_ids=(ad.view_id,),
                message=(
                    f"{ad.kind.value} ad {ad.view_id} covers {ratio:.4f} of the screen, "
                    f"allowed [{low}, {high}]"
                ),
                evidence={"ratio": ratio, "kind": ad.kind.value, "low": low, "high": high},
            )
        )
    return findings


def check_number(
    state: UIState,
    ad_views: Sequence[DetectedAd],
    screen: Screen,
    cfg: RuleConfig = _DEFAULT_RULES,
) -> list[FraudFinding]:
    """Ads that together take more than the allowed share of a content screen."""
    if not ad_views or not _content_leaves(state, ad_views) or screen.area <= 0:
        return []
    covered = union_area(clamp(node.bounds, screen) for _, node in _ad_nodes(state, ad_views))
    ratio = covered / screen.area
    if ratio <= cfg.number_area_cap:
        return []
    return [
        FraudFinding(
            type=FraudType.NUMBER,
            state_ids=(state.id,),
            view_ids=tuple(sorted(ad.view_id for ad in ad_views)),
            message=(
                f"{len(ad_views)} ad view(s) cover {ratio:.4f} of the screen, "
                f"cap {cfg.number_area_cap}"
            ),
            evidence={"ratio": ratio, "ad_count": len(ad_views), "cap": cfg.number_area_cap},
        )
    ]


def check_overlap(state: UIState, ad_views: Sequence[DetectedAd]) -> list[FraudFinding]:
    """Ad views drawn at or above clickable content they intersect."""
    findings: list[FraudFinding] = []
    clickable = [w for w in _content_leaves(state, ad_views) if w.clickable]
    for ad, node in _ad_nodes(state, ad_views):
        covered = sorted(
            (w for w in clickable if node.z >= w.z and intersects(node.bounds, w.bounds)),
            key=lambda w: w.id,
        )
        if not covered:
            continue
        findings.append(
            FraudFinding(
                type=FraudType.OVERLAP,
                state_ids=(state.id,),
                view_ids=(ad.view_id, *(w.id for w in covered)),
                message=f"ad view {ad.view_id} lies over {', '.join(w.id for w in covered)}",
                evidence={"overlapped_views": len(covered)},
            )
        )
    return findings


def _per_state(graph: UTGraph, ads: Annotation) -> list[tuple[UIState, Sequence[DetectedAd]]]:
    return [(state, ads[state.id]) for state in graph.states.values() if ads.get(state.id)]


@register_rule(FraudType.HIDDEN)
def _hidden_rule(graph: UTGraph, ads: Annotation, cfg: RuleConfig) -> list[FraudFinding]:
    return [f for state, views in _per_state(graph, ads) for f in check_hidden(state, views)]


@register_rule(FraudType.SIZE)
def _size_rule(graph: UTGraph, ads: Annotation, cfg: RuleConfig) -> list[FraudFinding]:
    return [
        f
        for state, views in _per_state(graph, ads)
        for f in check_size(state, views, graph.screen, cfg)
    ]


@register_rule(FraudType.NUMBER)
def _number_rule(graph: UTGraph, ads: Annotation, cfg: RuleConfig) -> list[FraudFinding]:
    return [
        f
        for state, views in _per_state(graph, ads)
        for f in check_number(state, views, graph.screen, cfg)
    ]


@register_rule(FraudType.OVERLAP)
def _overlap_rule(graph: UTGraph, ads: Annotation, cfg: RuleConfig) -> list[FraudFinding]:
    return [f for state, views in _per_state(graph, ads) for f in check_overlap(state, views)]


# ----------------------------------------------------------------------
# Dynamic interaction rules (whole graph)
# ----------------------------------------------------------------------


@register_rule(FraudType.INTERACTION)
def check_interaction(
    graph: UTGraph,
    ads: Annotation,
    cfg: RuleConfig = _DEFAULT_RULES,
) -> list[FraudFinding]:
    """An ad appearing over the spot where the previous state had a control."""
    seen: set[tuple[tuple[str, ...], tuple[str, ...]]] = set()
    findings: list[FraudFinding] = []
    for transition in graph.transitions:
        target_ads = ads.get(transition.target, ())
        if not target_ads:
            continue
        source = graph.states[transition.source]
        target = graph.states[transition.target]
        source_ad_ids = {ad.view_id for ad in ads.get(source.id, ())}
        controls = [
            view
            for view in leaf_views(source)
            if view.id not in source_ad_ids and is_interactive(view)
        ]
        for ad, node in _ad_nodes(target, target_ads):
            hit = sorted(v.id for v in controls if intersects(node.bounds, v.bounds))
            if not hit:
                continue
            key = ((source.id, target.id), (ad.view_id, *hit))
            if key in seen:
                continue
            seen.add(key)
            findings.append(
                FraudFinding(
                    type=FraudType.INTERACTION,
                    state_ids=key[0],
                    view_ids=key[1],
                    message=(
                        f"ad view {ad.view_id} in {target.id} appears over "
                        f"{', '.join(hit)} of {source.id}"
                    ),
                    evidence={"event": transition.event.type.value, "controls": len(hit)},
                )
            )
    return findings


def _state_records(graph: UTGraph, state: UIState) -> list[str]:
    ids = {r.id for r in graph.traffic.values() if r.state_id == state.id}
    ids.update(t for t in state.traffic_ids if t in graph.traffic)
    return sorted(ids)


@register_rule(FraudType.DRIVE_BY)
def check_drive_by(
    graph: UTGraph,
    ads: Annotation,
    cfg: RuleConfig = _DEFAULT_RULES,
) -> list[FraudFinding]:
    """A touch on an ad state starts an unconfirmed download while staying in-app.

    All four must hold for one transition: the source state shows ads, the
    event is a touch, the target keeps the source's activity, and the
    traffic of either state carries a download nobody confirmed.
    """
    seen: set[tuple[str, ...]] = set()
    findings: list[FraudFinding] = []
    for transition in graph.transitions:
        if transition.event.type not in TOUCH_EVENTS:
            continue
        if not ads.get(transition.source):
            continue
        source = graph.states[transition.source]
        target = graph.states[transition.target]
        if source.activity != target.activity:
            continue
        candidates = _state_records(graph, source)
        if target.id != source.id:
            candidates += _state_records(graph, target)
        payloads = [
            tid
            for tid in candidates
            if is_download(graph.traffic[tid], cfg.download_content_types)
        ]
        if not payloads:
            continue
        state_ids = (source.id, target.id)
        if state_ids in seen:
            continue
        seen.add(state_ids)
        clicked = transition.event.view_id
        findings.append(
            FraudFinding(
                type=FraudType.DRIVE_BY,
                state_ids=state_ids,
                view_ids=(clicked,) if clicked else (),
                message=(
                    f"{transition.event.type.value} in {source.id} downloads "
                    f"{', '.join(payloads)} without confirmation"
                ),
                evidence={"traffic_ids": ",".join(payloads), "downloads": len(payloads)},
            )
        )
    return findings


@register_rule(FraudType.OUTSIDE)
def check_outside(
    graph: UTGraph,
    ads: Annotation,
    cfg: RuleConfig = _DEFAULT_RULES,
) -> list[FraudFinding]:
    """Ads rendered while a foreign activity is in front."""
    return [
        FraudFinding(
            type=FraudType.OUTSIDE,
            state_ids=(state.id,),
            view_ids=tuple(sorted(ad.view_id for ad in views)),
            message=f"ad shown in external activity {state.activity}",
            evidence={"activity": state.activity, "ad_count": len(views)},
        )
        for state, views in _per_state(graph, ads)
        if state.kind is StateKind.EXTERNAL
    ]


def display_edges(graph: UTGraph, state_id: str) -> set[tuple[str, str, str, str | None]]:
    """Distinct incoming edges over which the state showed its ad.

    Graphs that never recorded displays fall back to every incoming edge.
    """
    if any(state.ad_displays for state in graph.states.values()):
        indices = graph.states[state_id].ad_displays
        return {graph.transitions[i].edge_key for i in indices}
    return {transition.edge_key for _, transition in graph.incoming(state_id)}


@register_rule(FraudType.FREQUENT)
def check_frequent(
    graph: UTGraph,
    ads: Annotation,
    cfg: RuleConfig = _DEFAULT_RULES,
) -> list[FraudFinding]:
    """Interstitial or full-screen ads displayed over too many distinct paths."""
    findings: list[FraudFinding] = []
    for state, views in _per_state(graph, ads):
        large = sorted(ad.view_id for ad in views if ad.kind in _LARGE_KINDS)
        if not large:
            continue
        count = len(display_edges(graph, state.id))
        if count <= cfg.frequent_threshold:
            continue
        findings.append(
            FraudFinding(
                type=FraudType.FREQUENT,
                state_ids=(state.id,),
                view_ids=tuple(large),
                message=(
                    f"ad state {state.id} displayed over {count} distinct transitions, "
                    f"threshold {cfg.frequent_threshold}"
                ),
                evidence={"displays": count, "threshold": cfg.frequent_threshold},
            )
        )
    return findings


@register_rule(FraudType.NON_CONTENT)
def check_non_content(
    graph: UTGraph,
    ads: Annotation,
    cfg: RuleConfig = _DEFAULT_RULES,
) -> list[FraudFinding]:
    """Large ads on launch/login/exit-like states, or on empty screens next to them."""
    undirected = state_digraph(graph).to_undirected()
    findings: list[FraudFinding] = []
    for state, views in _per_state(graph, ads):
        large = [ad for ad in views if ad.kind in _LARGE_KINDS]
        if not large:
            continue
        if state.kind in NON_CONTENT_KINDS:
            reason, anchor = f"{state.kind.value} state", state.id
        elif not _content_leaves(state, views):
            nearby = nx.single_source_shortest_path_length(
                undirected, state.id, cutoff=cfg.non_content_hops
            )
            anchors = sorted(
                sid
                for sid in nearby
                if sid != state.id and graph.states[sid].kind in NON_CONTENT_KINDS
            )
            if not anchors:
                continue
            anchor = anchors[0]
            reason = f"empty screen next to {graph.states[anchor].kind.value} state {anchor}"
        else:
            continue
        for ad in large:
            findings.append(
                FraudFinding(
                    type=FraudType.NON_CONTENT,
                    state_ids=(state.id,),
                    view_ids=(ad.view_id,),
                    message=f"{ad.kind.value} ad {ad.view_id} on {reason}",
                    evidence={"anchor_state": anchor, "kind": ad.kind.value},
                )
            )
    return findings


# ----------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------


def tag_state_kinds(
    graph: UTGraph,
    keywords: Mapping[StateKind, Sequence[str]] = KIND_KEYWORDS,
) -> UTGraph:
    """Tag content states of an ingested graph from activity-name keywords.

    States carrying any other kind keep it. The first matching kind in
    ``keywords`` order wins.
    """
    states: dict[str, UIState] = {}
    for sid, state in graph.states.items():
        if state.kind is StateKind.CONTENT:
            name = state.activity.rsplit(".", 1)[-1].lower()
            for kind, words in keywords.items():
                if any(word in name for word in words):
                    state = dataclasses.replace(state, kind=kind)
                    break
        states[sid] = state
    return dataclasses.replace(graph, states=states)


def run_rules(
    graph: UTGraph,
    ads: Annotation,
    cfg: RuleConfig = _DEFAULT_RULES,
) -> list[FraudFinding]:
    """Run the enabled rules, unsorted and unstamped."""
    findings: list[FraudFinding] = []
    for fraud_type, rule in _RULES.items():
        if fraud_type not in cfg.enabled:
            continue
        t0 = time.monotonic()
        found = rule(graph, ads, cfg)
        _LOGGER.debug(
            "Rule '%s': %d finding(s) in %.1fms",
            fraud_type.value,
            len(found),
            (time.monotonic() - t0) * 1000,
        )
        findings.extend(found)
    return findings


def check_all(
    graph: UTGraph,
    ad_cfg: AdFeatureConfig | None = None,
    rule_cfg: RuleConfig | None = None,
    *,
    ads: Annotation | None = None,
) -> FraudReport:
    """Detect ad views and evaluate every enabled rule.

    Raises GraphValidationError for graphs that fail validate().
    """
    ad_cfg = ad_cfg or AdFeatureConfig()
    rule_cfg = rule_cfg or RuleConfig()
    violations = validate(graph)
    if violations:
        raise GraphValidationError(violations)
    graph, _ = associate(graph)

    t0 = time.monotonic()
    if ads is None:
        ads = annotate(graph, ad_cfg)
    digest = config_hash(ad_cfg, rule_cfg)
    findings = sorted(
        (
            dataclasses.replace(f, rule_config_hash=digest)
            for f in run_rules(graph, ads, rule_cfg)
        ),
        key=lambda f: f.sort_key,
    )
    _LOGGER.info(
        "%s: %d state(s), %d finding(s) in %.1fms",
        graph.app.package,
        len(graph.states),
        len(findings),
        (time.monotonic() - t0) * 1000,
    )
    return FraudReport(package=graph.app.package, findings=tuple(findings), config_hash=digest)
