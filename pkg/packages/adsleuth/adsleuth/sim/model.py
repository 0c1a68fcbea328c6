"""Synthetic app models: screens, views, handlers and their JSON codec."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from adsleuth.const import AD_NETWORKS
from adsleuth.exceptions import GraphFormatError
from adsleuth.models import (
    AppMeta,
    Bounds,
    EventType,
    HttpMethod,
    Screen,
    StateKind,
    ViewNode,
    ViewTree,
)
from adsleuth.utg.codec import DocumentReader as _R
from adsleuth.utg.codec import dump_document, meta_from_json, meta_to_json

_LOGGER = logging.getLogger(__name__)

ROOT_VIEW_ID = "root"
CONTENT_VIEW_ID = "content"
SLOT_SUFFIX = "_slot"
MANIFEST_NAME = "manifest.json"

# Event types a handler may script; back/app_exit/app_start are built in.
HANDLED_EVENTS: frozenset[EventType] = frozenset(
    {EventType.CLICK, EventType.LONG_CLICK, EventType.SCROLL, EventType.DRAG}
)


@dataclass(frozen=True)
class ViewSpec:
    """A view a screen renders. ``ad_network`` marks views served by an ad library."""

    id: str
    class_name: str
    bounds: Bounds
    resource_id: str = ""
    text: str = ""
    clickable: bool = False
    floating: bool = False  # drawn above the content container
    ad_network: str | None = None
    load_failed: bool = False

    @property
    def is_ad(self) -> bool:
        return self.ad_network is not None


@dataclass(frozen=True)
class ScreenTemplate:
    name: str
    activity: str
    kind: StateKind
    views: tuple[ViewSpec, ...] = ()
    back: str | None = None  # None: back leaves the app
    inherits_ads: bool = False

    def view(self, view_id: str) -> ViewSpec | None:
        return next((v for v in self.views if v.id == view_id), None)

    @property
    def ad_views(self) -> tuple[ViewSpec, ...]:
        return tuple(v for v in self.views if v.is_ad)


@dataclass(frozen=True)
class TrafficSpec:
    url: str
    method: HttpMethod = HttpMethod.GET
    content_type: str = "text/html"
    length: int = 0
    magic: str = ""
    user_initiated: bool = False


@dataclass(frozen=True)
class Handler:
    """What firing ``event`` on ``view_id`` of ``screen`` does.

    ``target`` None keeps the current screen; traffic is emitted either way.
    """

    screen: str
    event: EventType
    view_id: str | None = None
    target: str | None = None
    traffic: tuple[TrafficSpec, ...] = ()

    @property
    def key(self) -> tuple[str, str | None, EventType]:
        return (self.screen, self.view_id, self.event)


@dataclass(frozen=True)
class AppModel:
    """A scripted app: the explorer's stand-in for a real APK."""

    meta: AppMeta
    screen: Screen
    start: str
    screens: dict[str, ScreenTemplate] = field(default_factory=dict)
    handlers: tuple[Handler, ...] = ()
    home: str | None = None  # external screen app_exit lands on
    ad_behaviors: tuple[str, ...] = ()
    faults: tuple[str, ...] = ()
    seed: int = 0

    @property
    def package(self) -> str:
        return self.meta.package

    def handler(self, screen: str, view_id: str | None, event: EventType) -> Handler | None:
        for handler in self.handlers:
            if handler.key == (screen, view_id, event):
                return handler
        return None

    def handlers_for(self, screen: str) -> list[Handler]:
        return [h for h in self.handlers if h.screen == screen]


def ad_trace(network: str) -> str:
    """The traced ad-load call of a network's SDK."""
    return f"{AD_NETWORKS[network][0]}.AdView.loadAd"


def validate_model(app: AppModel) -> list[str]:
    """Return every inconsistency of an app model; empty when valid."""
    violations: list[str] = []
    declared = set(app.meta.activities)
    if app.start not in app.screens:
        violations.append(f"start screen {app.start} is not defined")
    if app.home is not None and app.home not in app.screens:
        violations.append(f"home screen {app.home} is not defined")
    for name, template in app.screens.items():
        if name != template.name:
            violations.append(f"screen {name}: keyed under a different name {template.name}")
        external = template.activity not in declared
        if external != (template.kind is StateKind.EXTERNAL):
            violations.append(f"screen {name}: kind {template.kind.value} vs activity")
        if template.back is not None and template.back not in app.screens:
            violations.append(f"screen {name}: back target {template.back} is not defined")
        ids = [v.id for v in template.views]
        reserved = {ROOT_VIEW_ID, CONTENT_VIEW_ID}
        if len(set(ids)) != len(ids) or reserved & set(ids):
            violations.append(f"screen {name}: duplicate or reserved view ids")
        for view in template.views:
            if view.ad_network is not None and view.ad_network not in AD_NETWORKS:
                violations.append(f"screen {name} view {view.id}: unknown network {view.ad_network}")
    seen: set[tuple[str, str | None, EventType]] = set()
    for handler in app.handlers:
        where = f"handler {handler.screen}/{handler.view_id}/{handler.event.value}"
        if handler.key in seen:
            violations.append(f"{where}: defined twice")
        seen.add(handler.key)
        if handler.event not in HANDLED_EVENTS:
            violations.append(f"{where}: built-in event cannot be scripted")
        screen = app.screens.get(handler.screen)
        if screen is None:
            violations.append(f"{where}: unknown screen")
            continue
        if handler.view_id is not None and screen.view(handler.view_id) is None:
            violations.append(f"{where}: unknown view")
        if handler.target is not None:
            target = app.screens.get(handler.target)
            if target is None:
                violations.append(f"{where}: unknown target {handler.target}")
            elif target.kind is not StateKind.EXTERNAL and target.activity not in declared:
                violations.append(f"{where}: target activity {target.activity} not declared")
    return violations


def build_view_tree(template: ScreenTemplate, screen: Screen) -> ViewTree:
    """Lay out a screen's rendered view tree.

    Failed ads leave an empty full-screen slot at the bottom; inline views
    sit in a content container (omitted when there are none); floating
    views are drawn last. Z follows that order.
    """
    full = Bounds(0, 0, screen.width, screen.height)
    rendered = [v for v in template.views if not (v.is_ad and v.load_failed)]
    inline = [v for v in rendered if not v.floating]
    floating = [v for v in rendered if v.floating]

    layers: list[ViewNode] = [
        ViewNode(
            id=f"{v.id}{SLOT_SUFFIX}",
            class_name="android.widget.FrameLayout",
            bounds=full,
            z=0,
            resource_id=f"{v.resource_id or v.id}{SLOT_SUFFIX}",
        )
        for v in template.views
        if v.is_ad and v.load_failed
    ]
    if inline:
        layers.append(
            ViewNode(
                id=CONTENT_VIEW_ID,
                class_name="android.widget.LinearLayout",
                bounds=full,
                z=0,
                children=tuple(v.id for v in inline),
            )
        )
    top_level = [node.id for node in layers] + [v.id for v in floating]
    layers += [
        ViewNode(
            id=v.id,
            class_name=v.class_name,
            bounds=v.bounds,
            z=0,
            resource_id=v.resource_id,
            text=v.text,
            clickable=v.clickable,
        )
        for v in [*inline, *floating]
    ]
    root = ViewNode(
        id=ROOT_VIEW_ID,
        class_name="android.widget.FrameLayout",
        bounds=full,
        z=0,
        children=tuple(top_level),
    )
    nodes = {
        node.id: dataclasses.replace(node, z=depth)
        for depth, node in enumerate([root, *layers])
    }
    return ViewTree(root=ROOT_VIEW_ID, nodes=nodes)


# ----------------------------------------------------------------------
# JSON codec
# ----------------------------------------------------------------------


def _view_to_json(view: ViewSpec) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": view.id,
        "class": view.class_name,
        "bounds": view.bounds.as_list(),
        "resource_id": view.resource_id,
        "text": view.text,
        "clickable": view.clickable,
        "floating": view.floating,
        "load_failed": view.load_failed,
    }
    if view.ad_network is not None:
        doc["ad_network"] = view.ad_network
    return doc


def _view_from_json(value: Any, path: str) -> ViewSpec:
    doc = _R.obj(
        value,
        path,
        ("id", "class", "bounds"),
        ("resource_id", "text", "clickable", "floating", "ad_network", "load_failed"),
    )
    network = doc.get("ad_network")
    return ViewSpec(
        id=_R.string(doc["id"], f"{path}.id"),
        class_name=_R.string(doc["class"], f"{path}.class"),
        bounds=_R.bounds(doc["bounds"], f"{path}.bounds"),
        resource_id=_R.string(doc.get("resource_id", ""), f"{path}.resource_id"),
        text=_R.string(doc.get("text", ""), f"{path}.text"),
        clickable=_R.boolean(doc.get("clickable", False), f"{path}.clickable"),
        floating=_R.boolean(doc.get("floating", False), f"{path}.floating"),
        ad_network=_R.string(network, f"{path}.ad_network") if network is not None else None,
        load_failed=_R.boolean(doc.get("load_failed", False), f"{path}.load_failed"),
    )


def _screen_to_json(template: ScreenTemplate) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "name": template.name,
        "activity": template.activity,
        "kind": template.kind.value,
        "views": [_view_to_json(v) for v in template.views],
        "inherits_ads": template.inherits_ads,
    }
    if template.back is not None:
        doc["back"] = template.back
    return doc


def _screen_from_json(value: Any, path: str) -> ScreenTemplate:
    doc = _R.obj(
        value, path, ("name", "activity", "kind", "views"), ("back", "inherits_ads")
    )
    back = doc.get("back")
    return ScreenTemplate(
        name=_R.string(doc["name"], f"{path}.name"),
        activity=_R.string(doc["activity"], f"{path}.activity"),
        kind=_R.enum(StateKind, doc["kind"], f"{path}.kind"),
        views=tuple(_R.items(doc["views"], f"{path}.views", _view_from_json)),
        back=_R.string(back, f"{path}.back") if back is not None else None,
        inherits_ads=_R.boolean(doc.get("inherits_ads", False), f"{path}.inherits_ads"),
    )


def _traffic_spec_to_json(spec: TrafficSpec) -> dict[str, Any]:
    return {
        "url": spec.url,
        "method": spec.method.value,
        "content_type": spec.content_type,
        "length": spec.length,
        "magic": spec.magic,
        "user_initiated": spec.user_initiated,
    }


def _traffic_spec_from_json(value: Any, path: str) -> TrafficSpec:
    doc = _R.obj(
        value, path, ("url",), ("method", "content_type", "length", "magic", "user_initiated")
    )
    return TrafficSpec(
        url=_R.string(doc["url"], f"{path}.url"),
        method=_R.enum(HttpMethod, doc.get("method", "GET"), f"{path}.method"),
        content_type=_R.string(doc.get("content_type", "text/html"), f"{path}.content_type"),
        length=_R.integer(doc.get("length", 0), f"{path}.length"),
        magic=_R.string(doc.get("magic", ""), f"{path}.magic"),
        user_initiated=_R.boolean(doc.get("user_initiated", False), f"{path}.user_initiated"),
    )


def _handler_to_json(handler: Handler) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "screen": handler.screen,
        "event": handler.event.value,
        "traffic": [_traffic_spec_to_json(t) for t in handler.traffic],
    }
    if handler.view_id is not None:
        doc["view_id"] = handler.view_id
    if handler.target is not None:
        doc["target"] = handler.target
    return doc


def _handler_from_json(value: Any, path: str) -> Handler:
    doc = _R.obj(value, path, ("screen", "event"), ("view_id", "target", "traffic"))
    view_id = doc.get("view_id")
    target = doc.get("target")
    return Handler(
        screen=_R.string(doc["screen"], f"{path}.screen"),
        event=_R.enum(EventType, doc["event"], f"{path}.event"),
        view_id=_R.string(view_id, f"{path}.view_id") if view_id is not None else None,
        target=_R.string(target, f"{path}.target") if target is not None else None,
        traffic=tuple(_R.items(doc.get("traffic", []), f"{path}.traffic", _traffic_spec_from_json)),
    )


def model_to_json(app: AppModel) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "app": meta_to_json(app.meta),
        "screen": {"width": app.screen.width, "height": app.screen.height},
        "start": app.start,
        "screens": [_screen_to_json(s) for s in app.screens.values()],
        "handlers": [_handler_to_json(h) for h in app.handlers],
        "ad_behaviors": list(app.ad_behaviors),
        "faults": list(app.faults),
        "seed": app.seed,
    }
    if app.home is not None:
        doc["home"] = app.home
    return doc


def model_from_json(value: Any) -> AppModel:
    doc = _R.obj(
        value,
        "$",
        ("app", "screen", "start", "screens", "handlers"),
        ("home", "ad_behaviors", "faults", "seed"),
    )
    screen = _R.obj(doc["screen"], "$.screen", ("width", "height"))
    screens: dict[str, ScreenTemplate] = {}
    for template in _R.items(doc["screens"], "$.screens", _screen_from_json):
        if template.name in screens:
            raise GraphFormatError(f"duplicate screen {template.name!r}", path="$.screens")
        screens[template.name] = template
    home = doc.get("home")
    return AppModel(
        meta=meta_from_json(doc["app"], "$.app"),
        screen=Screen(
            width=_R.integer(screen["width"], "$.screen.width"),
            height=_R.integer(screen["height"], "$.screen.height"),
        ),
        start=_R.string(doc["start"], "$.start"),
        screens=screens,
        handlers=tuple(_R.items(doc["handlers"], "$.handlers", _handler_from_json)),
        home=_R.string(home, "$.home") if home is not None else None,
        ad_behaviors=_R.strings(doc.get("ad_behaviors", []), "$.ad_behaviors"),
        faults=_R.strings(doc.get("faults", []), "$.faults"),
        seed=_R.integer(doc.get("seed", 0), "$.seed"),
    )


def dump_model(app: AppModel) -> bytes:
    """Encode an app model as canonical JSON."""
    return dump_document(model_to_json(app))


def load_model(data: bytes | str) -> AppModel:
    """Decode an app model document; raises GraphFormatError."""
    return model_from_json(_R.parse(data))


# ----------------------------------------------------------------------
# Benchmark directories
# ----------------------------------------------------------------------


def write_benchmark(models: list[AppModel], directory: str | Path) -> Path:
    """Write one ``<package>.json`` per model plus a label manifest."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, Any] = {}
    for app in models:
        (out / f"{app.package}.json").write_bytes(dump_model(app))
        label = app.meta.label
        manifest[app.package] = {
            "frauds": [f.value for f in label.frauds] if label else [],
            "ad_network": label.ad_network if label else None,
        }
    (out / MANIFEST_NAME).write_bytes(dump_document(manifest))
    _LOGGER.info("Wrote %d app model(s) to %s", len(models), out)
    return out


def benchmark_files(directory: str | Path) -> list[Path]:
    """Model or graph documents of a benchmark directory, sorted by name."""
    return sorted(
        p for p in Path(directory).glob("*.json") if p.is_file() and p.name != MANIFEST_NAME
    )
