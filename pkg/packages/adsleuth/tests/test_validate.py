"""Tests for adsleuth.utg.validate: structural UTG invariants."""

from __future__ import annotations

import dataclasses

import pytest

from adsleuth.exceptions import GraphValidationError
from adsleuth.models import Bounds, EventType, Screen, StateKind, UTGraph, ViewNode, ViewTree
from adsleuth.rules import check_all
from adsleuth.utg.validate import state_digraph, validate

from .factories import BROWSER, EXIT_ACTIVITY, button, graph, move, record, state, view


def _valid() -> UTGraph:
    return graph(
        [
            state("s0", [button("btn_ok", Bounds(0, 0, 100, 100), 1)]),
            state("s1", activity=EXIT_ACTIVITY, kind=StateKind.EXIT),
            state("s2", activity=BROWSER, kind=StateKind.EXTERNAL),
        ],
        [
            move("s0", "s1", EventType.BACK),
            move("s1", "s2", view_id="btn_ok"),
            move("s2", "s0", EventType.APP_START),
        ],
        [record("t0", "s1")],
    )


def _with_tree(nodes: list[ViewNode], root: str = "root") -> UTGraph:
    base = _valid()
    s0 = dataclasses.replace(
        base.states["s0"], view_tree=ViewTree(root=root, nodes={n.id: n for n in nodes})
    )
    return dataclasses.replace(base, states={**base.states, "s0": s0})


class TestValidate:
    def test_valid_graph(self) -> None:
        assert validate(_valid()) == []

    def test_empty_graph(self) -> None:
        g = dataclasses.replace(_valid(), states={}, transitions=(), traffic={})
        assert "graph: no states" in validate(g)

    def test_invalid_screen(self) -> None:
        g = dataclasses.replace(_valid(), screen=Screen(0, 1776))
        assert any(v.startswith("screen:") for v in validate(g))

    def test_root_missing(self) -> None:
        g = _with_tree([view("a", Bounds(0, 0, 1, 1), 1)], root="nope")
        assert any("root nope not in view tree" in v for v in validate(g))

    def test_unknown_child(self) -> None:
        root = ViewNode("root", "FrameLayout", Bounds(0, 0, 10, 10), 0, children=("ghost",))
        assert any("unknown child ghost" in v for v in validate(_with_tree([root])))

    def test_view_with_two_parents(self) -> None:
        leaf = view("leaf", Bounds(0, 0, 1, 1), 3)
        a = ViewNode("a", "LinearLayout", Bounds(0, 0, 5, 5), 1, children=("leaf",))
        b = ViewNode("b", "LinearLayout", Bounds(0, 0, 5, 5), 2, children=("leaf",))
        root = ViewNode("root", "FrameLayout", Bounds(0, 0, 10, 10), 0, children=("a", "b"))
        violations = validate(_with_tree([root, a, b, leaf]))
        assert any("view leaf: expected exactly one parent, found 2" in v for v in violations)

    def test_orphan_view(self) -> None:
        root = ViewNode("root", "FrameLayout", Bounds(0, 0, 10, 10), 0)
        orphan = view("orphan", Bounds(0, 0, 1, 1), 1)
        violations = validate(_with_tree([root, orphan]))
        assert any("view orphan: expected exactly one parent, found 0" in v for v in violations)

    def test_cycle(self) -> None:
        a = ViewNode("a", "LinearLayout", Bounds(0, 0, 5, 5), 1, children=("b",))
        b = ViewNode("b", "LinearLayout", Bounds(0, 0, 5, 5), 2, children=("a",))
        root = ViewNode("root", "FrameLayout", Bounds(0, 0, 10, 10), 0, children=("a",))
        assert validate(_with_tree([root, a, b]))

    def test_shared_z(self) -> None:
        g = graph(
            [state("s0", [view("a", Bounds(0, 0, 1, 1), 1), view("b", Bounds(0, 0, 1, 1), 1)])]
        )
        assert "state s0: views a, b share z=1" in validate(g)

    def test_inverted_bounds(self) -> None:
        g = graph([state("s0", [view("a", Bounds(10, 0, 5, 5), 1)])])
        assert any("invalid bounds [10, 0, 5, 5]" in v for v in validate(g))

    def test_negative_coordinates(self) -> None:
        g = graph([state("s0", [view("a", Bounds(-1, 0, 5, 5), 1)])])
        assert any("invalid bounds" in v for v in validate(g))

    def test_external_kind_must_match_activity(self) -> None:
        g = graph([state("s0", activity=BROWSER, kind=StateKind.CONTENT)])
        assert any("inconsistent with activity" in v for v in validate(g))
        g = graph([state("s0", kind=StateKind.EXTERNAL)])
        assert any("inconsistent with activity" in v for v in validate(g))

    def test_unknown_transition_endpoints(self) -> None:
        g = graph([state("s0")], [move("s0", "s9")])
        assert "transition 0: unknown target s9" in validate(g)

    def test_app_start_must_reach_start_state(self) -> None:
        g = graph([state("s0"), state("s1")], [move("s0", "s1", EventType.APP_START)])
        assert any("app_start reaches s1" in v for v in validate(g))

    def test_unknown_traffic_reference(self) -> None:
        g = graph([state("s0", traffic_ids=("t7",))])
        assert "state s0: unknown traffic t7" in validate(g)

    def test_traffic_in_unknown_state(self) -> None:
        g = graph([state("s0")], traffic=[record("t0", "s5")])
        assert "traffic t0: unknown state s5" in validate(g)

    def test_malformed_body_magic(self) -> None:
        g = graph([state("s0")], traffic=[record("t0", "s0", magic="zz"), record("t1", "s0")])
        assert validate(g) == ["traffic t0: body_magic 'zz' is not an even-length hex string"]

    def test_malformed_body_magic_rejected_by_check_all(self) -> None:
        g = graph([state("s0", traffic_ids=("t0",))], traffic=[record("t0", "s0", magic="504")])
        with pytest.raises(GraphValidationError, match="body_magic"):
            check_all(g)

    def test_ad_display_must_enter_state(self) -> None:
        g = graph(
            [state("s0", displays=(0,)), state("s1")],
            [move("s0", "s1")],
        )
        assert any("not entering it" in v for v in validate(g))
        g = graph([state("s0", displays=(4,))])
        assert any("unknown transition 4" in v for v in validate(g))

    def test_inherited_view_must_exist(self) -> None:
        g = graph([state("s0", inherited=("gone",))])
        assert "state s0: unknown inherited view gone" in validate(g)

    def test_violations_are_data_until_check_all(self) -> None:
        g = graph([state("s0")], [move("s0", "s9")])
        assert validate(g)
        with pytest.raises(GraphValidationError) as exc_info:
            check_all(g)
        assert exc_info.value.violations == validate(g)


class TestStateDigraph:
    def test_parallel_transitions_collapse(self) -> None:
        g = graph(
            [state("s0"), state("s1")],
            [move("s0", "s1"), move("s0", "s1", EventType.BACK), move("s1", "s0")],
        )
        digraph = state_digraph(g)
        assert set(digraph.nodes) == {"s0", "s1"}
        assert set(digraph.edges) == {("s0", "s1"), ("s1", "s0")}
