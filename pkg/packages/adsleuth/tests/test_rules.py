"""Tests for adsleuth.rules: the nine fraud rules and check_all."""

from __future__ import annotations

import logging
import random
import time

import pytest

from adsleuth.adviews import annotate
from adsleuth.config import AdFeatureConfig, RuleConfig, config_hash
from adsleuth.models import (
    NON_CONTENT_KINDS,
    AdKind,
    Bounds,
    DetectedAd,
    EventType,
    FraudType,
    StateKind,
    UIState,
    UTGraph,
)
from adsleuth.rules import (
    check_all,
    check_drive_by,
    check_frequent,
    check_hidden,
    check_interaction,
    check_non_content,
    check_number,
    check_outside,
    check_overlap,
    check_size,
    display_edges,
    is_interactive,
    registered_rules,
    tag_state_kinds,
)

from .factories import (
    ACTIVITY,
    BOTTOM_BANNER,
    BROWSER,
    EXIT_ACTIVITY,
    FULL,
    POPUP,
    SCREEN,
    ad,
    button,
    graph,
    move,
    record,
    state,
    view,
)

APK_MAGIC = "504B030414000800"
APK_TYPE = "application/vnd.android.package-archive"


def _cells(b: Bounds) -> set[tuple[int, int]]:
    return {(x, y) for x in range(b.left, b.right) for y in range(b.top, b.bottom)}


def _grid_bounds(rng: random.Random, size: int = 24) -> Bounds:
    left, top = rng.randrange(size), rng.randrange(size)
    return Bounds(left, top, rng.randint(left, size), rng.randint(top, size))


CONTROL_CLASSES = (
    "android.widget.Button",
    "android.widget.TextView",
    "com.example.ui.AlertDialog",
    "android.widget.ImageView",
)
INTERACTIVE_CLASSES = {"android.widget.Button", "com.example.ui.AlertDialog"}
LARGE_KINDS = {AdKind.INTERSTITIAL, AdKind.FULL_SCREEN}


def _random_states(
    rng: random.Random, ids: list[str], kinds: list[StateKind]
) -> tuple[list[UIState], dict[str, tuple[DetectedAd, ...]]]:
    """Flat random states on a small grid, with a random subset of views marked as ads."""
    states = []
    ads: dict[str, tuple[DetectedAd, ...]] = {}
    for sid in ids:
        n = rng.randint(0, 4)
        zs = rng.sample(range(1, 20), n)
        views = [
            view(
                f"v{i}",
                _grid_bounds(rng),
                zs[i],
                class_name=rng.choice(CONTROL_CLASSES),
                clickable=rng.random() < 0.6,
            )
            for i in range(n)
        ]
        chosen = [v for v in views if rng.random() < 0.35]
        if chosen:
            ads[sid] = tuple(DetectedAd(v.id, rng.choice(list(AdKind))) for v in chosen)
        states.append(state(sid, views, kind=rng.choice(kinds)))
    return states, ads


class TestRegistry:
    def test_every_fraud_type_has_a_rule(self) -> None:
        assert set(registered_rules()) == set(FraudType)


class TestHidden:
    def test_ad_behind_button(self) -> None:
        s = state(
            "s0",
            [ad("ad", Bounds(0, 0, 200, 100), 1), button("btn", Bounds(50, 0, 250, 100), 2)],
        )
        findings = check_hidden(s, [DetectedAd("ad", AdKind.BANNER)])
        assert len(findings) == 1
        assert findings[0].type is FraudType.HIDDEN
        assert findings[0].view_ids == ("ad", "btn")
        assert findings[0].evidence["max_covered_area"] == 150 * 100

    def test_top_most_ad_is_not_hidden(self) -> None:
        s = state(
            "s0",
            [ad("ad", Bounds(0, 0, 200, 100), 2), button("btn", Bounds(50, 0, 250, 100), 1)],
        )
        assert check_hidden(s, [DetectedAd("ad", AdKind.BANNER)]) == []

    def test_ad_fully_behind_email_button(self) -> None:
        s = state(
            "s0",
            [
                ad("ad_banner", BOTTOM_BANNER, 1),
                button("btn_email", Bounds(0, 1600, 1080, 1776), 2),
            ],
        )
        findings = check_hidden(s, [DetectedAd("ad_banner", AdKind.BANNER)])
        assert [f.view_ids for f in findings] == [("ad_banner", "btn_email")]

    def test_other_ads_do_not_hide(self) -> None:
        s = state(
            "s0", [ad("ad_a", Bounds(0, 0, 200, 100), 1), ad("ad_b", Bounds(0, 0, 200, 100), 2)]
        )
        ads = [DetectedAd("ad_b", AdKind.BANNER), DetectedAd("ad_a", AdKind.BANNER)]
        assert check_hidden(s, ads) == []


class TestOverlap:
    def test_ad_over_clickable_content(self) -> None:
        s = state(
            "s0",
            [button("btn", Bounds(220, 560, 540, 880), 1), ad("ad_overlay", POPUP, 2)],
        )
        findings = check_overlap(s, [DetectedAd("ad_overlay", AdKind.INTERSTITIAL)])
        assert [f.view_ids for f in findings] == [("ad_overlay", "btn")]

    def test_non_clickable_content_ignored(self) -> None:
        s = state("s0", [view("txt", Bounds(220, 560, 540, 880), 1), ad("ad_overlay", POPUP, 2)])
        assert check_overlap(s, [DetectedAd("ad_overlay", AdKind.INTERSTITIAL)]) == []


class TestPlacementOracle:
    def test_hidden_and_overlap_match_pair_scan(self) -> None:
        rng = random.Random(4242)
        for _ in range(1200):
            n = rng.randint(2, 6)
            zs = rng.sample(range(1, 20), n)
            views = [
                view(
                    f"v{i}",
                    _grid_bounds(rng),
                    zs[i],
                    resource_id="ad_slot" if rng.random() < 0.4 else "",
                    clickable=rng.random() < 0.5,
                )
                for i in range(n)
            ]
            s = state("s0", views)
            ad_nodes = sorted((v for v in views if v.resource_id), key=lambda v: -v.z)
            ads = [DetectedAd(v.id, AdKind.BANNER) for v in ad_nodes]
            others = [v for v in views if not v.resource_id]

            expected_hidden = []
            expected_overlap = []
            for a in ad_nodes:
                over = sorted(
                    w.id for w in others if w.z > a.z and _cells(a.bounds) & _cells(w.bounds)
                )
                if over:
                    expected_hidden.append((a.id, *over))
                under = sorted(
                    w.id
                    for w in others
                    if w.clickable and a.z > w.z and _cells(a.bounds) & _cells(w.bounds)
                )
                if under:
                    expected_overlap.append((a.id, *under))

            assert [f.view_ids for f in check_hidden(s, ads)] == expected_hidden
            assert [f.view_ids for f in check_overlap(s, ads)] == expected_overlap


class TestSize:
    def test_popup_passes(self) -> None:
        s = state("s0", [ad("popup", POPUP, 1)])
        assert check_size(s, [DetectedAd("popup", AdKind.INTERSTITIAL)], SCREEN) == []

    def test_small_interstitial_flagged(self) -> None:
        s = state("s0", [ad("small", Bounds(490, 838, 590, 938), 1)])
        findings = check_size(s, [DetectedAd("small", AdKind.INTERSTITIAL)], SCREEN)
        assert len(findings) == 1
        assert findings[0].evidence["ratio"] == pytest.approx(10000 / 1918080, abs=1e-12)
        assert findings[0].evidence["low"] == 0.2

    def test_full_screen_boundary_included(self) -> None:
        s = state("s0", [ad("full", FULL, 1)])
        assert check_size(s, [DetectedAd("full", AdKind.FULL_SCREEN)], SCREEN) == []

    def test_oversized_banner(self) -> None:
        s = state("s0", [ad("wide", Bounds(0, 1546, 1080, 1776), 1)])
        findings = check_size(s, [DetectedAd("wide", AdKind.BANNER)], SCREEN)
        assert findings[0].evidence["kind"] == "banner"

    def test_configurable_banner_interval(self) -> None:
        s = state("s0", [ad("ad_banner", BOTTOM_BANNER, 1)])
        strict = RuleConfig(banner_size=(0.004, 0.005))
        assert check_size(s, [DetectedAd("ad_banner", AdKind.BANNER)], SCREEN) == []
        assert check_size(s, [DetectedAd("ad_banner", AdKind.BANNER)], SCREEN, strict)


class TestNumber:
    def test_three_ads_over_half_the_screen(self) -> None:
        s = state(
            "s0",
            [
                ad("ad_top", Bounds(0, 0, 1080, 400), 1),
                ad("ad_mid", Bounds(0, 500, 1080, 900), 2),
                ad("ad_low", Bounds(0, 1000, 1080, 1300), 3),
                view("txt", Bounds(0, 1400, 1080, 1500), 4),
            ],
        )
        ads = [DetectedAd(i, AdKind.INTERSTITIAL) for i in ("ad_low", "ad_mid", "ad_top")]
        findings = check_number(s, ads, SCREEN)
        assert len(findings) == 1
        assert findings[0].evidence["ratio"] == pytest.approx(1188000 / 1918080)
        assert findings[0].evidence["ad_count"] == 3
        assert findings[0].view_ids == ("ad_low", "ad_mid", "ad_top")

    def test_single_banner(self) -> None:
        s = state("s0", [ad("ad_banner", BOTTOM_BANNER, 1), view("txt", Bounds(0, 0, 10, 10), 2)])
        assert check_number(s, [DetectedAd("ad_banner", AdKind.BANNER)], SCREEN) == []

    def test_overlapping_ads_counted_once(self) -> None:
        box = Bounds(0, 0, 1080, 800)
        s = state("s0", [ad("a", box, 1), ad("b", box, 2), view("txt", Bounds(0, 900, 10, 910), 3)])
        ads = [DetectedAd("b", AdKind.INTERSTITIAL), DetectedAd("a", AdKind.INTERSTITIAL)]
        assert check_number(s, ads, SCREEN) == []

    def test_needs_app_content(self) -> None:
        s = state("s0", [ad("a", Bounds(0, 0, 1080, 1200), 1)])
        assert check_number(s, [DetectedAd("a", AdKind.INTERSTITIAL)], SCREEN) == []


class TestInteraction:
    def _graph(self, control_class: str) -> UTGraph:
        control = view(
            "btn_close", Bounds(100, 100, 300, 200), 1, class_name=control_class, clickable=True
        )
        return graph(
            [state("s0", [control]), state("s1", [ad("ad_full", FULL, 1)])],
            [move("s0", "s1", view_id="btn_close")],
        )

    def test_ad_pops_over_previous_button(self) -> None:
        g = self._graph("android.widget.Button")
        findings = check_interaction(g, annotate(g))
        assert len(findings) == 1
        assert findings[0].state_ids == ("s0", "s1")
        assert findings[0].view_ids == ("ad_full", "btn_close")

    def test_plain_text_is_not_a_control(self) -> None:
        g = self._graph("android.widget.TextView")
        assert check_interaction(g, annotate(g)) == []

    def test_repeated_transitions_reported_once(self) -> None:
        g = self._graph("android.widget.Button")
        g = graph(
            g.states.values(), [*g.transitions, move("s0", "s1", EventType.LONG_CLICK, "btn_close")]
        )
        assert len(check_interaction(g, annotate(g))) == 1

    def test_matches_transition_pair_scan(self) -> None:
        rng = random.Random(2718)
        events = [EventType.CLICK, EventType.LONG_CLICK, EventType.BACK, EventType.SCROLL]
        ids = [f"s{i}" for i in range(8)]
        for _ in range(1000):
            states, ads = _random_states(rng, ids, [StateKind.CONTENT])
            transitions = [
                move(rng.choice(ids), rng.choice(ids), rng.choice(events))
                for _ in range(rng.randint(0, 12))
            ]
            g = graph(states, transitions)
            cells = {
                (s.id, v.id): _cells(v.bounds) for s in states for v in s.view_tree.nodes.values()
            }

            expected: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
            for t in transitions:
                source_ads = {a.view_id for a in ads.get(t.source, ())}
                controls = [
                    v.id
                    for v in g.states[t.source].view_tree.nodes.values()
                    if v.id != "root"
                    and v.id not in source_ads
                    and v.clickable
                    and v.class_name in INTERACTIVE_CLASSES
                ]
                for a in ads.get(t.target, ()):
                    ad_cells = cells[(t.target, a.view_id)]
                    hit = sorted(c for c in controls if ad_cells & cells[(t.source, c)])
                    key = ((t.source, t.target), (a.view_id, *hit))
                    if hit and key not in expected:
                        expected.append(key)

            found = check_interaction(g, ads)
            assert [(f.state_ids, f.view_ids) for f in found] == expected

    def test_is_interactive(self) -> None:
        assert is_interactive(button("b", FULL, 1))
        assert not is_interactive(view("b", FULL, 1, class_name="android.widget.Button"))
        assert is_interactive(view("d", FULL, 1, class_name="a.b.AlertDialog", clickable=True))


class TestDriveBy:
    def _graph(
        self,
        *,
        ads: bool,
        touch: bool,
        same_activity: bool,
        download: bool,
        in_target: bool,
        user_initiated_apk: bool,
    ) -> UTGraph:
        first = (
            ad("ad_banner", BOTTOM_BANNER, 1)
            if ads
            else view("txt_footer", BOTTOM_BANNER, 1, class_name="android.widget.TextView")
        )
        where = "s1" if in_target else "s0"
        if download:
            traffic = record("t0", where, content_type=APK_TYPE, length=4096, magic=APK_MAGIC)
        elif user_initiated_apk:
            traffic = record(
                "t0", where, content_type=APK_TYPE, magic=APK_MAGIC, user_initiated=True
            )
        else:
            traffic = record("t0", where, content_type="text/html", length=512)
        return graph(
            [
                state("s0", [first]),
                state("s1", activity=ACTIVITY if same_activity else EXIT_ACTIVITY),
            ],
            [move("s0", "s1", EventType.CLICK if touch else EventType.SCROLL, first.id)],
            [traffic],
        )

    def test_truth_table(self) -> None:
        rng = random.Random(16)
        rows_seen = set()
        for i in range(1024):
            row = i % 16
            flags = {
                "ads": bool(row & 1),
                "touch": bool(row & 2),
                "same_activity": bool(row & 4),
                "download": bool(row & 8),
            }
            g = self._graph(
                **flags,
                in_target=rng.random() < 0.5,
                user_initiated_apk=rng.random() < 0.5,
            )
            findings = check_drive_by(g, annotate(g))
            expected = all(flags.values())
            assert bool(findings) == expected, flags
            if expected:
                assert findings[0].state_ids == ("s0", "s1")
                assert findings[0].view_ids == ("ad_banner",)
                assert findings[0].evidence["traffic_ids"] == "t0"
            rows_seen.add(row)
        assert rows_seen == set(range(16))

    def test_self_loop_download(self) -> None:
        g = graph(
            [state("s0", [ad("ad_banner", BOTTOM_BANNER, 1)])],
            [move("s0", "s0", view_id="ad_banner")],
            [record("t0", "s0", content_type="application/octet-stream", length=10)],
        )
        findings = check_drive_by(g, annotate(g))
        assert [f.state_ids for f in findings] == [("s0", "s0")]

    def test_disabled_content_type(self) -> None:
        g = graph(
            [state("s0", [ad("ad_banner", BOTTOM_BANNER, 1)]), state("s1")],
            [move("s0", "s1", view_id="ad_banner")],
            [record("t0", "s1", content_type="application/zip")],
        )
        assert check_drive_by(g, annotate(g))
        cfg = RuleConfig(download_content_types=())
        assert check_drive_by(g, annotate(g), cfg) == []


class TestOutside:
    def test_ad_in_external_activity(self) -> None:
        g = graph(
            [
                state("s0"),
                state(
                    "s1",
                    [ad("ad_home", BOTTOM_BANNER, 1)],
                    activity=BROWSER,
                    kind=StateKind.EXTERNAL,
                ),
            ],
            [move("s0", "s1", EventType.APP_EXIT)],
        )
        findings = check_outside(g, annotate(g))
        assert len(findings) == 1
        assert findings[0].evidence["activity"] == BROWSER

    def test_in_app_ads_are_fine(self) -> None:
        g = graph([state("s0", [ad("ad_banner", BOTTOM_BANNER, 1)])])
        assert check_outside(g, annotate(g)) == []

    def test_matches_external_membership(self) -> None:
        rng = random.Random(1618)
        ids = [f"s{i}" for i in range(6)]
        for _ in range(1000):
            states, ads = _random_states(rng, ids, list(StateKind))
            external = {s.id for s in states if s.kind is StateKind.EXTERNAL}
            expected = [
                (sid, tuple(sorted(a.view_id for a in ads[sid])))
                for sid in ids
                if sid in external and sid in ads
            ]
            found = check_outside(graph(states), ads)
            assert [(f.state_ids[0], f.view_ids) for f in found] == expected
            assert all(f.evidence["ad_count"] == len(ads[f.state_ids[0]]) for f in found)


class TestFrequent:
    def test_matches_incoming_edge_enumeration(self) -> None:
        rng = random.Random(8)
        events = [EventType.CLICK, EventType.LONG_CLICK, EventType.BACK, EventType.SCROLL]
        for _ in range(1000):
            n = rng.randint(1, 8)
            ids = [f"s{i}" for i in range(n)]
            transitions = [
                move(rng.choice(ids), rng.choice(ids), rng.choice(events), rng.choice([None, "a", "b"]))
                for _ in range(rng.randint(0, 20))
            ]
            ads = {
                sid: (DetectedAd("ad_pop", rng.choice(list(AdKind))),)
                for sid in ids
                if rng.random() < 0.5
            }
            threshold = rng.randint(1, 4)
            g = graph([state(sid) for sid in ids], transitions)

            expected = []
            for sid in ids:
                if sid not in ads or ads[sid][0].kind is AdKind.BANNER:
                    continue
                edges = {
                    (t.source, t.target, t.event.type, t.event.view_id)
                    for t in transitions
                    if t.target == sid
                }
                if len(edges) > threshold:
                    expected.append((sid, len(edges)))

            found = check_frequent(g, ads, RuleConfig(frequent_threshold=threshold))
            assert [(f.state_ids[0], f.evidence["displays"]) for f in found] == expected

    def test_strictly_more_than_threshold(self) -> None:
        g = graph(
            [state("s0"), state("s1"), state("s2"), state("s3"), state("ad")],
            [move(s, "ad") for s in ("s0", "s1", "s2")],
        )
        ads = {"ad": (DetectedAd("ad_pop", AdKind.INTERSTITIAL),)}
        assert check_frequent(g, ads) == []
        g = graph(g.states.values(), [*g.transitions, move("s3", "ad")])
        assert len(check_frequent(g, ads)) == 1

    def test_recorded_displays_take_precedence(self) -> None:
        transitions = [move(s, "ad") for s in ("s0", "s1", "s2", "s3", "s4")]
        g = graph(
            [*(state(f"s{i}") for i in range(5)), state("ad", displays=(0, 1))],
            transitions,
        )
        assert len(display_edges(g, "ad")) == 2
        ads = {"ad": (DetectedAd("ad_pop", AdKind.INTERSTITIAL),)}
        assert check_frequent(g, ads, RuleConfig(frequent_threshold=1))
        assert check_frequent(g, ads, RuleConfig(frequent_threshold=2)) == []


class TestNonContent:
    def test_ad_on_exit_state(self) -> None:
        g = graph(
            [
                state(
                    "s0",
                    [ad("ad_exit", Bounds(140, 160, 940, 660), 1), button("btn", FULL, 2)],
                    activity=EXIT_ACTIVITY,
                    kind=StateKind.EXIT,
                )
            ]
        )
        ads = {"s0": (DetectedAd("ad_exit", AdKind.INTERSTITIAL),)}
        findings = check_non_content(g, ads)
        assert [f.view_ids for f in findings] == [("ad_exit",)]
        assert findings[0].evidence["anchor_state"] == "s0"

    def test_banner_on_exit_state_is_fine(self) -> None:
        g = graph([state("s0", [ad("ad_banner", BOTTOM_BANNER, 1)], kind=StateKind.EXIT)])
        assert check_non_content(g, annotate(g)) == []

    def test_empty_ad_screen_after_splash(self) -> None:
        g = graph(
            [state("s0", kind=StateKind.LAUNCH), state("s1", [ad("ad_full", FULL, 1)])],
            [move("s0", "s1", view_id="btn_continue")],
        )
        findings = check_non_content(g, annotate(g))
        assert [f.state_ids for f in findings] == [("s1",)]
        assert findings[0].evidence["anchor_state"] == "s0"

    def test_ad_with_content_is_fine(self) -> None:
        g = graph(
            [
                state("s0", kind=StateKind.LAUNCH),
                state("s1", [ad("ad_full", FULL, 1), button("btn", Bounds(0, 0, 10, 10), 2)]),
            ],
            [move("s0", "s1")],
        )
        assert check_non_content(g, annotate(g)) == []

    def test_hop_limit(self) -> None:
        g = graph(
            [
                state("s0", kind=StateKind.LAUNCH),
                state("s1", [view("txt", Bounds(0, 0, 10, 10), 1)]),
                state("s2", [ad("ad_full", FULL, 1)]),
            ],
            [move("s0", "s1"), move("s1", "s2")],
        )
        assert check_non_content(g, annotate(g)) == []
        assert check_non_content(g, annotate(g), RuleConfig(non_content_hops=2))

    def test_matches_kind_and_neighbour_scan(self) -> None:
        rng = random.Random(3141)
        tagged = sorted(NON_CONTENT_KINDS, key=lambda k: k.value)
        kinds = [StateKind.CONTENT, StateKind.CONTENT, StateKind.EXTERNAL, *tagged]
        ids = [f"s{i}" for i in range(6)]
        for _ in range(1000):
            states, ads = _random_states(rng, ids, kinds)
            transitions = [move(rng.choice(ids), rng.choice(ids)) for _ in range(rng.randint(0, 8))]
            hops = rng.randint(1, 3)
            g = graph(states, transitions)
            neighbours: dict[str, set[str]] = {sid: set() for sid in ids}
            for t in transitions:
                neighbours[t.source].add(t.target)
                neighbours[t.target].add(t.source)

            expected = []
            for s in states:
                large = [a for a in ads.get(s.id, ()) if a.kind in LARGE_KINDS]
                if not large:
                    continue
                ad_ids = {a.view_id for a in ads[s.id]}
                views = [v for v in s.view_tree.nodes.values() if v.id != "root"]
                has_content = not views or any(v.id not in ad_ids for v in views)
                if s.kind in NON_CONTENT_KINDS:
                    anchor = s.id
                elif has_content:
                    continue
                else:
                    reach, frontier = {s.id}, {s.id}
                    for _ in range(hops):
                        frontier = {n for f in frontier for n in neighbours[f]} - reach
                        reach |= frontier
                    anchors = sorted(
                        sid for sid in reach - {s.id} if g.states[sid].kind in NON_CONTENT_KINDS
                    )
                    if not anchors:
                        continue
                    anchor = anchors[0]
                expected += [(s.id, a.view_id, anchor) for a in large]

            found = check_non_content(g, ads, RuleConfig(non_content_hops=hops))
            assert [
                (f.state_ids[0], f.view_ids[0], f.evidence["anchor_state"]) for f in found
            ] == expected


class TestTagStateKinds:
    def test_keywords(self) -> None:
        g = graph(
            [
                state("s0", activity="com.example.app.SplashActivity"),
                state("s1", activity="com.example.app.LoginActivity"),
                state("s2", activity="com.example.app.ThankYouActivity"),
                state("s3", activity=ACTIVITY),
                state("s4", activity="com.example.app.SplashActivity", kind=StateKind.EXIT),
            ],
            activities=(
                "com.example.app.SplashActivity",
                "com.example.app.LoginActivity",
                "com.example.app.ThankYouActivity",
                ACTIVITY,
            ),
        )
        kinds = {sid: s.kind for sid, s in tag_state_kinds(g).states.items()}
        assert kinds == {
            "s0": StateKind.LAUNCH,
            "s1": StateKind.LOGIN,
            "s2": StateKind.THANKYOU,
            "s3": StateKind.CONTENT,
            "s4": StateKind.EXIT,
        }


class TestCheckAll:
    def _popup_graph(self) -> UTGraph:
        popup = view("popup", POPUP, 1, class_name="com.pop.is.ar")
        return graph([state("s0", [popup])])

    def test_popup_state_is_clean(self) -> None:
        report = check_all(self._popup_graph())
        assert report.findings == ()
        assert not report.fraudulent
        assert report.config_hash == config_hash(AdFeatureConfig(), RuleConfig())

    def test_dangling_traffic_view_is_logged(self, caplog: pytest.LogCaptureFixture) -> None:
        g = graph(
            [state("s0", [ad("ad_banner", BOTTOM_BANNER, 1)])],
            traffic=[record("t0", "s0", view_id="ad_banner"), record("t1", "s0", view_id="ad_gone")],
        )
        with caplog.at_level(logging.WARNING, logger="adsleuth.traffic"):
            check_all(g)
        warnings = [r.getMessage() for r in caplog.records if r.levelno == logging.WARNING]
        assert warnings == [f"{g.app.package}: traffic t1: view ad_gone not found in state s0"]

    def test_findings_sorted_and_stamped(self) -> None:
        g = graph(
            [
                state(
                    "s0",
                    [
                        ad("ad_banner", Bounds(0, 1576, 1080, 1776), 1),
                        button("btn_email", Bounds(100, 1600, 400, 1700), 2),
                    ],
                )
            ]
        )
        report = check_all(g)
        assert [f.type for f in report.findings] == [FraudType.HIDDEN, FraudType.SIZE]
        assert report.fraud_types == frozenset({FraudType.HIDDEN, FraudType.SIZE})
        assert {f.rule_config_hash for f in report.findings} == {report.config_hash}

    def test_disabled_rules(self) -> None:
        g = graph(
            [
                state(
                    "s0",
                    [
                        ad("ad_banner", Bounds(0, 1576, 1080, 1776), 1),
                        button("btn_email", Bounds(100, 1600, 400, 1700), 2),
                    ],
                )
            ]
        )
        rule_cfg = RuleConfig().without(FraudType.HIDDEN)
        report = check_all(g, rule_cfg=rule_cfg)
        assert [f.type for f in report.findings] == [FraudType.SIZE]
        assert report.config_hash != check_all(g).config_hash

    def test_desk_scale_graph_is_fast(self) -> None:
        states = []
        for i in range(100):
            views = [ad("ad_banner", BOTTOM_BANNER, 1)]
            views += [
                button(f"btn_{j}", Bounds(0, 80 * j, 540, 80 * j + 70), j + 1) for j in range(1, 20)
            ]
            states.append(state(f"s{i}", views))
        transitions = [move(f"s{i}", f"s{(i + 1) % 100}", view_id="btn_1") for i in range(100)]
        transitions += [move(f"s{i}", f"s{(i * 7) % 100}", EventType.BACK) for i in range(100)]
        g = graph(states, transitions)
        assert sum(len(s.view_tree.nodes) - 1 for s in g.states.values()) == 2000

        best = float("inf")
        for _ in range(3):
            t0 = time.perf_counter()
            check_all(g)
            best = min(best, time.perf_counter() - t0)
        assert best < 0.4
