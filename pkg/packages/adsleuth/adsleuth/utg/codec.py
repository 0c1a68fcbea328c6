"""JSON encode/decode for UI state transition graphs.

One UTF-8 document per app. Unknown fields are rejected and every
diagnostic names the offending position.
"""

from __future__ import annotations

import json
from collections.abc import Callable
from enum import Enum
from typing import Any, TypeVar

from adsleuth.exceptions import GraphFormatError
from adsleuth.models import (
    AppLabel,
    AppMeta,
    Bounds,
    EventType,
    FraudType,
    HttpMethod,
    InputEvent,
    Screen,
    StateKind,
    TrafficRecord,
    Transition,
    UIState,
    UTGraph,
    ViewNode,
    ViewTree,
)

_E = TypeVar("_E", bound=Enum)
_T = TypeVar("_T")


class DocumentReader:
    """Typed accessors over a decoded JSON document with path tracking."""

    @staticmethod
    def parse(data: bytes | str) -> Any:
        try:
            return json.loads(data)
        except json.JSONDecodeError as err:
            raise GraphFormatError(err.msg, line=err.lineno, column=err.colno) from err
        except UnicodeDecodeError as err:
            raise GraphFormatError(f"document is not UTF-8: {err}") from err

    @staticmethod
    def obj(
        value: Any,
        path: str,
        required: tuple[str, ...],
        optional: tuple[str, ...] = (),
    ) -> dict[str, Any]:
        if not isinstance(value, dict):
            raise GraphFormatError("expected an object", path=path)
        unknown = sorted(set(value) - set(required) - set(optional))
        if unknown:
            raise GraphFormatError(f"unknown field {unknown[0]!r}", path=path)
        for key in required:
            if key not in value:
                raise GraphFormatError(f"missing field {key!r}", path=path)
        return value

    @staticmethod
    def string(value: Any, path: str) -> str:
        if not isinstance(value, str):
            raise GraphFormatError("expected a string", path=path)
        return value

    @staticmethod
    def integer(value: Any, path: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise GraphFormatError("expected an integer", path=path)
        return value

    @staticmethod
    def number(value: Any, path: str) -> float:
        if isinstance(value, bool) or not isinstance(value, int | float):
            raise GraphFormatError("expected a number", path=path)
        return float(value)

    @staticmethod
    def boolean(value: Any, path: str) -> bool:
        if not isinstance(value, bool):
            raise GraphFormatError("expected a boolean", path=path)
        return value

    @staticmethod
    def array(value: Any, path: str) -> list[Any]:
        if not isinstance(value, list):
            raise GraphFormatError("expected an array", path=path)
        return value

    @classmethod
    def items(cls, value: Any, path: str, read: Callable[[Any, str], _T]) -> list[_T]:
        return [read(item, f"{path}[{i}]") for i, item in enumerate(cls.array(value, path))]

    @classmethod
    def strings(cls, value: Any, path: str) -> tuple[str, ...]:
        return tuple(cls.items(value, path, cls.string))

    @classmethod
    def enum(cls, enum_type: type[_E], value: Any, path: str) -> _E:
        raw = cls.string(value, path)
        try:
            return enum_type(raw)
        except ValueError as err:
            raise GraphFormatError(f"unknown {enum_type.__name__} {raw!r}", path=path) from err

    @classmethod
    def bounds(cls, value: Any, path: str) -> Bounds:
        coords = cls.items(value, path, cls.integer)
        if len(coords) != 4:
            raise GraphFormatError("bounds must be [left, top, right, bottom]", path=path)
        return Bounds(*coords)


_R = DocumentReader


def dump_document(doc: Any) -> bytes:
    """Canonical encoding: sorted keys, compact separators, UTF-8."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()


# ----------------------------------------------------------------------
# Encode
# ----------------------------------------------------------------------


def label_to_json(label: AppLabel) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "frauds": [f.value for f in label.frauds],
        "ad_views": {sid: list(views) for sid, views in label.ad_views.items()},
    }
    if label.ad_network is not None:
        doc["ad_network"] = label.ad_network
    return doc


def meta_to_json(meta: AppMeta) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "package": meta.package,
        "permissions": list(meta.permissions),
        "activities": list(meta.activities),
        "detected_ad_libs": list(meta.detected_ad_libs),
    }
    if meta.label is not None:
        doc["label"] = label_to_json(meta.label)
    return doc


def _node_to_json(node: ViewNode) -> dict[str, Any]:
    return {
        "id": node.id,
        "class": node.class_name,
        "resource_id": node.resource_id,
        "text": node.text,
        "bounds": node.bounds.as_list(),
        "z": node.z,
        "clickable": node.clickable,
        "children": list(node.children),
    }


def _state_to_json(state: UIState) -> dict[str, Any]:
    return {
        "id": state.id,
        "activity": state.activity,
        "kind": state.kind.value,
        "ad_load_traces": list(state.ad_load_traces),
        "traffic_ids": list(state.traffic_ids),
        "inherited_ad_views": list(state.inherited_ad_views),
        "ad_displays": list(state.ad_displays),
        "view_tree": {
            "root": state.view_tree.root,
            "nodes": [_node_to_json(n) for n in state.view_tree.nodes.values()],
        },
    }


def _transition_to_json(transition: Transition) -> dict[str, Any]:
    event: dict[str, Any] = {"type": transition.event.type.value}
    if transition.event.view_id is not None:
        event["view_id"] = transition.event.view_id
    return {"source": transition.source, "target": transition.target, "event": event}


def _traffic_to_json(record: TrafficRecord) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": record.id,
        "state_id": record.state_id,
        "method": record.method.value,
        "url": record.url,
        "response_content_type": record.response_content_type,
        "response_length": record.response_length,
        "body_magic": record.body_magic,
        "user_initiated": record.user_initiated,
    }
    if record.view_id is not None:
        doc["view_id"] = record.view_id
    return doc


def graph_to_json(graph: UTGraph) -> dict[str, Any]:
    return {
        "app": meta_to_json(graph.app),
        "screen": {"width": graph.screen.width, "height": graph.screen.height},
        "states": [_state_to_json(s) for s in graph.states.values()],
        "transitions": [_transition_to_json(t) for t in graph.transitions],
        "traffic": [_traffic_to_json(r) for r in graph.traffic.values()],
    }


def serialize(graph: UTGraph) -> bytes:
    """Encode a graph as its canonical JSON document."""
    return dump_document(graph_to_json(graph))


# ----------------------------------------------------------------------
# Decode
# ----------------------------------------------------------------------


def label_from_json(value: Any, path: str) -> AppLabel:
    doc = _R.obj(value, path, ("frauds",), ("ad_network", "ad_views"))
    frauds = tuple(
        _R.enum(FraudType, item, f"{path}.frauds[{i}]")
        for i, item in enumerate(_R.array(doc["frauds"], f"{path}.frauds"))
    )
    network = doc.get("ad_network")
    ad_views_doc = doc.get("ad_views", {})
    if not isinstance(ad_views_doc, dict):
        raise GraphFormatError("expected an object", path=f"{path}.ad_views")
    ad_views = {
        str(sid): _R.strings(views, f"{path}.ad_views.{sid}")
        for sid, views in ad_views_doc.items()
    }
    return AppLabel(
        frauds=frauds,
        ad_network=_R.string(network, f"{path}.ad_network") if network is not None else None,
        ad_views=ad_views,
    )


def meta_from_json(value: Any, path: str) -> AppMeta:
    doc = _R.obj(
        value, path, ("package", "permissions", "activities", "detected_ad_libs"), ("label",)
    )
    label = doc.get("label")
    return AppMeta(
        package=_R.string(doc["package"], f"{path}.package"),
        permissions=_R.strings(doc["permissions"], f"{path}.permissions"),
        activities=_R.strings(doc["activities"], f"{path}.activities"),
        detected_ad_libs=_R.strings(doc["detected_ad_libs"], f"{path}.detected_ad_libs"),
        label=label_from_json(label, f"{path}.label") if label is not None else None,
    )


def _node_from_json(value: Any, path: str) -> ViewNode:
    doc = _R.obj(
        value,
        path,
        ("id", "class", "resource_id", "text", "bounds", "z", "clickable", "children"),
    )
    return ViewNode(
        id=_R.string(doc["id"], f"{path}.id"),
        class_name=_R.string(doc["class"], f"{path}.class"),
        resource_id=_R.string(doc["resource_id"], f"{path}.resource_id"),
        text=_R.string(doc["text"], f"{path}.text"),
        bounds=_R.bounds(doc["bounds"], f"{path}.bounds"),
        z=_R.integer(doc["z"], f"{path}.z"),
        clickable=_R.boolean(doc["clickable"], f"{path}.clickable"),
        children=_R.strings(doc["children"], f"{path}.children"),
    )


def _state_from_json(value: Any, path: str) -> UIState:
    doc = _R.obj(
        value,
        path,
        ("id", "activity", "kind", "ad_load_traces", "traffic_ids", "view_tree"),
        ("inherited_ad_views", "ad_displays"),
    )
    tree_path = f"{path}.view_tree"
    tree_doc = _R.obj(doc["view_tree"], tree_path, ("root", "nodes"))
    nodes: dict[str, ViewNode] = {}
    for node in _R.items(tree_doc["nodes"], f"{tree_path}.nodes", _node_from_json):
        if node.id in nodes:
            raise GraphFormatError(f"duplicate view id {node.id!r}", path=f"{tree_path}.nodes")
        nodes[node.id] = node
    return UIState(
        id=_R.string(doc["id"], f"{path}.id"),
        activity=_R.string(doc["activity"], f"{path}.activity"),
        kind=_R.enum(StateKind, doc["kind"], f"{path}.kind"),
        view_tree=ViewTree(root=_R.string(tree_doc["root"], f"{tree_path}.root"), nodes=nodes),
        ad_load_traces=_R.strings(doc["ad_load_traces"], f"{path}.ad_load_traces"),
        traffic_ids=_R.strings(doc["traffic_ids"], f"{path}.traffic_ids"),
        inherited_ad_views=_R.strings(doc.get("inherited_ad_views", []), f"{path}.inherited_ad_views"),
        ad_displays=tuple(_R.items(doc.get("ad_displays", []), f"{path}.ad_displays", _R.integer)),
    )


def _transition_from_json(value: Any, path: str) -> Transition:
    doc = _R.obj(value, path, ("source", "target", "event"))
    event = _R.obj(doc["event"], f"{path}.event", ("type",), ("view_id",))
    view_id = event.get("view_id")
    return Transition(
        source=_R.string(doc["source"], f"{path}.source"),
        target=_R.string(doc["target"], f"{path}.target"),
        event=InputEvent(
            type=_R.enum(EventType, event["type"], f"{path}.event.type"),
            view_id=_R.string(view_id, f"{path}.event.view_id") if view_id is not None else None,
        ),
    )


def _traffic_from_json(value: Any, path: str) -> TrafficRecord:
    doc = _R.obj(
        value,
        path,
        (
            "id",
            "state_id",
            "method",
            "url",
            "response_content_type",
            "response_length",
            "body_magic",
            "user_initiated",
        ),
        ("view_id",),
    )
    view_id = doc.get("view_id")
    return TrafficRecord(
        id=_R.string(doc["id"], f"{path}.id"),
        state_id=_R.string(doc["state_id"], f"{path}.state_id"),
        view_id=_R.string(view_id, f"{path}.view_id") if view_id is not None else None,
        method=_R.enum(HttpMethod, doc["method"], f"{path}.method"),
        url=_R.string(doc["url"], f"{path}.url"),
        response_content_type=_R.string(
            doc["response_content_type"], f"{path}.response_content_type"
        ),
        response_length=_R.integer(doc["response_length"], f"{path}.response_length"),
        body_magic=_R.string(doc["body_magic"], f"{path}.body_magic"),
        user_initiated=_R.boolean(doc["user_initiated"], f"{path}.user_initiated"),
    )


def graph_from_json(value: Any) -> UTGraph:
    doc = _R.obj(value, "$", ("app", "screen", "states", "transitions", "traffic"))
    screen = _R.obj(doc["screen"], "$.screen", ("width", "height"))
    states: dict[str, UIState] = {}
    for state in _R.items(doc["states"], "$.states", _state_from_json):
        if state.id in states:
            raise GraphFormatError(f"duplicate state id {state.id!r}", path="$.states")
        states[state.id] = state
    traffic: dict[str, TrafficRecord] = {}
    for record in _R.items(doc["traffic"], "$.traffic", _traffic_from_json):
        if record.id in traffic:
            raise GraphFormatError(f"duplicate traffic id {record.id!r}", path="$.traffic")
        traffic[record.id] = record
    return UTGraph(
        app=meta_from_json(doc["app"], "$.app"),
        screen=Screen(
            width=_R.integer(screen["width"], "$.screen.width"),
            height=_R.integer(screen["height"], "$.screen.height"),
        ),
        states=states,
        transitions=tuple(_R.items(doc["transitions"], "$.transitions", _transition_from_json)),
        traffic=traffic,
    )


def deserialize(data: bytes | str) -> UTGraph:
    """Decode a UTG document.

    Raises GraphFormatError with the position of the first problem.
    """
    return graph_from_json(_R.parse(data))
