"""Traffic association and download classification."""

from __future__ import annotations

import logging
import string

from .const import OCTET_STREAM, ZIP_MAGIC
from .exceptions import GraphValidationError, TrafficFormatError
from .models import DownloadEvent, PayloadClass, TrafficRecord, UTGraph

_LOGGER = logging.getLogger(__name__)

_HEX_DIGITS = frozenset(string.hexdigits)


def is_hex_magic(magic: str) -> bool:
    """True for an even-length hex string; the empty prefix counts."""
    return not len(magic) % 2 and set(magic) <= _HEX_DIGITS


def _normalized_magic(record: TrafficRecord) -> str:
    magic = record.body_magic
    if not is_hex_magic(magic):
        raise TrafficFormatError(
            f"traffic {record.id}: body_magic {magic!r} is not an even-length hex string"
        )
    return magic.upper()


def _content_type(record: TrafficRecord) -> str:
    # "application/octet-stream; charset=binary" → "application/octet-stream"
    return record.response_content_type.split(";", 1)[0].strip().lower()


def classify_download(record: TrafficRecord) -> DownloadEvent | None:
    """Classify a response as a download, or None for pages and media.

    APKs are ZIP archives, so the local-file-header magic decides
    ``apk_archive`` regardless of the declared content type.
    """
    magic = _normalized_magic(record)
    if magic.startswith(ZIP_MAGIC):
        payload = PayloadClass.APK_ARCHIVE
    elif _content_type(record) == OCTET_STREAM and record.response_length > 0:
        payload = PayloadClass.GENERIC_BINARY
    else:
        return None
    return DownloadEvent(
        traffic_id=record.id,
        state_id=record.state_id,
        payload_class=payload,
        user_initiated=record.user_initiated,
        view_id=record.view_id,
    )


def is_download(record: TrafficRecord, content_types: tuple[str, ...]) -> bool:
    """Downloading behaviour for the drive-by rule: a payload nobody confirmed."""
    if record.user_initiated:
        return False
    if classify_download(record) is not None:
        return True
    return _content_type(record) in {ct.lower() for ct in content_types}


def associate(graph: UTGraph) -> tuple[UTGraph, list[str]]:
    """Check each record's state and view link.

    Records without a view stay state-scoped. A view id missing from its
    state is reported as a diagnostic; the graph is returned unchanged.

    Raises GraphValidationError when a record names an unknown state.
    """
    unknown = [
        f"traffic {r.id}: unknown state {r.state_id}"
        for r in graph.traffic.values()
        if r.state_id not in graph.states
    ]
    if unknown:
        raise GraphValidationError(unknown)

    diagnostics: list[str] = []
    for record in graph.traffic.values():
        if record.view_id is None:
            continue
        state = graph.states[record.state_id]
        if record.view_id not in state.view_tree.nodes:
            message = (
                f"traffic {record.id}: view {record.view_id} not found in state {state.id}"
            )
            _LOGGER.warning("%s: %s", graph.app.package, message)
            diagnostics.append(message)
    return graph, diagnostics

