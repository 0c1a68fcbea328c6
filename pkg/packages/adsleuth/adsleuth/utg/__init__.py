"""UI state transition graph primitives: geometry, codec and validation."""

from .codec import deserialize, serialize
from .geometry import intersection_area, intersects, leaf_views, union_area
from .validate import state_digraph, validate

__all__ = [
    "deserialize",
    "intersection_area",
    "intersects",
    "leaf_views",
    "serialize",
    "state_digraph",
    "union_area",
    "validate",
]
