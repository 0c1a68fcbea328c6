"""Structural validation of UI state transition graphs."""

from __future__ import annotations

from collections import defaultdict

import networkx as nx

from adsleuth.models import EventType, StateKind, UIState, UTGraph
from adsleuth.traffic import is_hex_magic


def state_digraph(graph: UTGraph) -> nx.DiGraph:
    """Directed state graph (parallel transitions collapsed)."""
    digraph = nx.DiGraph()
    digraph.add_nodes_from(graph.states)
    digraph.add_edges_from(
        (t.source, t.target)
        for t in graph.transitions
        if t.source in graph.states and t.target in graph.states
    )
    return digraph


def _tree_violations(state: UIState) -> list[str]:
    prefix = f"state {state.id}"
    tree = state.view_tree
    violations: list[str] = []
    if tree.root not in tree.nodes:
        return [f"{prefix}: root {tree.root} not in view tree"]

    parents: dict[str, list[str]] = defaultdict(list)
    edges = nx.DiGraph()
    edges.add_nodes_from(tree.nodes)
    for node in tree.nodes.values():
        for child in node.children:
            if child not in tree.nodes:
                violations.append(f"{prefix} view {node.id}: unknown child {child}")
                continue
            parents[child].append(node.id)
            edges.add_edge(node.id, child)

    if parents.get(tree.root):
        violations.append(f"{prefix}: root {tree.root} has a parent")
    for node_id in tree.nodes:
        if node_id == tree.root:
            continue
        owners = parents.get(node_id, [])
        if len(owners) != 1:
            violations.append(
                f"{prefix} view {node_id}: expected exactly one parent, found {len(owners)}"
            )
    if not violations and not nx.is_arborescence(edges):
        violations.append(f"{prefix}: view tree is not a tree rooted at {tree.root}")
    return violations


def _view_violations(state: UIState) -> list[str]:
    prefix = f"state {state.id}"
    violations: list[str] = []
    by_z: dict[int, list[str]] = defaultdict(list)
    for node in state.view_tree.nodes.values():
        b = node.bounds
        if b.left > b.right or b.top > b.bottom or min(b.left, b.top) < 0:
            violations.append(f"{prefix} view {node.id}: invalid bounds {b.as_list()}")
        by_z[node.z].append(node.id)
    for z, ids in sorted(by_z.items()):
        if len(ids) > 1:
            violations.append(f"{prefix}: views {', '.join(sorted(ids))} share z={z}")
    return violations


def validate(graph: UTGraph) -> list[str]:
    """Return a description for every violated invariant; empty when valid."""
    violations: list[str] = []

    if not graph.app.package:
        violations.append("app: package is empty")
    if not graph.app.activities:
        violations.append("app: no declared activities")
    if graph.screen.width <= 0 or graph.screen.height <= 0:
        violations.append(f"screen: invalid size {graph.screen.width}x{graph.screen.height}")
    if not graph.states:
        violations.append("graph: no states")

    declared = set(graph.app.activities)
    for state in graph.states.values():
        violations.extend(_tree_violations(state))
        violations.extend(_view_violations(state))
        external = state.activity not in declared
        if external != (state.kind is StateKind.EXTERNAL):
            violations.append(
                f"state {state.id}: kind {state.kind.value} inconsistent with activity "
                f"{state.activity}"
            )
        for traffic_id in state.traffic_ids:
            if traffic_id not in graph.traffic:
                violations.append(f"state {state.id}: unknown traffic {traffic_id}")
        for view_id in state.inherited_ad_views:
            if view_id not in state.view_tree.nodes:
                violations.append(f"state {state.id}: unknown inherited view {view_id}")
        for index in state.ad_displays:
            if not 0 <= index < len(graph.transitions):
                violations.append(f"state {state.id}: ad display on unknown transition {index}")
            elif graph.transitions[index].target != state.id:
                violations.append(
                    f"state {state.id}: ad display on transition {index} not entering it"
                )

    for i, transition in enumerate(graph.transitions):
        if transition.source not in graph.states:
            violations.append(f"transition {i}: unknown source {transition.source}")
        if transition.target not in graph.states:
            violations.append(f"transition {i}: unknown target {transition.target}")

    start = graph.start_state
    starts = {t.target for t in graph.transitions if t.event.type is EventType.APP_START}
    if start is not None and starts - {start.id}:
        violations.append(
            f"graph: app_start reaches {', '.join(sorted(starts))}, expected only {start.id}"
        )

    for record in graph.traffic.values():
        if record.state_id not in graph.states:
            violations.append(f"traffic {record.id}: unknown state {record.state_id}")
        if not is_hex_magic(record.body_magic):
            violations.append(
                f"traffic {record.id}: body_magic {record.body_magic!r} "
                "is not an even-length hex string"
            )

    return violations
