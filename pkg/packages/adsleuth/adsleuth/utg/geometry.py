"""Rectangle arithmetic and view-tree traversal."""

from __future__ import annotations

from collections.abc import Iterable

from adsleuth.models import Bounds, Screen, UIState, ViewNode


def intersection_area(a: Bounds, b: Bounds) -> int:
    """Area shared by two rectangles; shared edges have zero area."""
    width = min(a.right, b.right) - max(a.left, b.left)
    height = min(a.bottom, b.bottom) - max(a.top, b.top)
    if width <= 0 or height <= 0:
        return 0
    return width * height


def intersects(a: Bounds, b: Bounds) -> bool:
    """True when the rectangles share a positive area."""
    return intersection_area(a, b) > 0


def union_area(rects: Iterable[Bounds]) -> int:
    """Area covered by any of the rectangles, overlaps counted once.

    Sweeps the distinct x coordinates and merges the covered y intervals of
    each vertical slab.
    """
    boxes = [r for r in rects if r.area > 0]
    if not boxes:
        return 0
    xs = sorted({x for r in boxes for x in (r.left, r.right)})
    total = 0
    for x0, x1 in zip(xs, xs[1:], strict=False):
        spans = sorted((r.top, r.bottom) for r in boxes if r.left <= x0 and r.right >= x1)
        covered = 0
        cur_top: int | None = None
        cur_bottom = 0
        for top, bottom in spans:
            if cur_top is None or top > cur_bottom:
                if cur_top is not None:
                    covered += cur_bottom - cur_top
                cur_top, cur_bottom = top, bottom
            else:
                cur_bottom = max(cur_bottom, bottom)
        if cur_top is not None:
            covered += cur_bottom - cur_top
        total += covered * (x1 - x0)
    return total


def clamp(bounds: Bounds, screen: Screen) -> Bounds:
    """Clip bounds to the screen rectangle."""
    left = min(max(bounds.left, 0), screen.width)
    top = min(max(bounds.top, 0), screen.height)
    right = min(max(bounds.right, left), screen.width)
    bottom = min(max(bounds.bottom, top), screen.height)
    return Bounds(left, top, right, bottom)


def area_ratio(bounds: Bounds, screen: Screen) -> float:
    """Fraction of the screen covered by the (clamped) bounds."""
    if screen.area <= 0:
        return 0.0
    return clamp(bounds, screen).area / screen.area


def leaf_views(state: UIState) -> list[ViewNode]:
    """Childless views of a state, top-most (highest z) first."""
    leaves = [node for node in state.view_tree.nodes.values() if node.is_leaf]
    leaves.sort(key=lambda node: node.z, reverse=True)
    return leaves


def parent_map(state: UIState) -> dict[str, str]:
    """Map child id → parent id."""
    return {
        child: node.id for node in state.view_tree.nodes.values() for child in node.children
    }
