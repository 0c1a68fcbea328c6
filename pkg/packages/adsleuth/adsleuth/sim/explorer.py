"""Event-driven exploration of app models into UI state transition graphs.

The explorer plays the part of a UI automation bot. Each fired event costs
one unit of budget and advances a virtual clock by ``transition_wait``.
``ad_first`` is a prioritized breadth-first traversal: actions that touch
ad-like views or lead to ad screens, and the first back/exit of every
activity, run before anything else. ``random`` is a uniform random walk.
"""

from __future__ import annotations

import dataclasses
import heapq
import logging
import random
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx

from adsleuth.adviews import looks_like_ad
from adsleuth.exceptions import ConfigError, GraphValidationError
from adsleuth.models import (
    NO_RELOAD_EVENTS,
    EventType,
    InputEvent,
    StateKind,
    TrafficRecord,
    Transition,
    UIState,
    UTGraph,
    ViewTree,
)

from .model import AppModel, ScreenTemplate, ad_trace, build_view_tree, validate_model

_LOGGER = logging.getLogger(__name__)

_AD_PRIORITY = 0
_PLAIN_PRIORITY = 1


class Strategy(Enum):
    AD_FIRST = "ad_first"
    RANDOM = "random"


@dataclass(frozen=True)
class ExplorationConfig:
    strategy: Strategy = Strategy.AD_FIRST
    event_budget: int = 200
    transition_wait: float = 5.0  # virtual seconds per event
    seed: int = 0

    def __post_init__(self) -> None:
        if self.event_budget < 1:
            raise ConfigError(f"event_budget must be >= 1, got {self.event_budget}")
        if self.transition_wait < 0:
            raise ConfigError(f"transition_wait must be >= 0, got {self.transition_wait}")


@dataclass(frozen=True)
class Action:
    event: EventType
    view_id: str | None = None


@dataclass
class _StateRecord:
    """Mutable accumulator for one discovered screen."""

    id: str
    template: ScreenTemplate
    view_tree: ViewTree
    traces: set[str] = field(default_factory=set)
    traffic_ids: list[str] = field(default_factory=list)
    inherited: set[str] = field(default_factory=set)
    displays: list[int] = field(default_factory=list)

    def freeze(self) -> UIState:
        return UIState(
            id=self.id,
            activity=self.template.activity,
            kind=self.template.kind,
            view_tree=self.view_tree,
            ad_load_traces=tuple(sorted(self.traces)),
            traffic_ids=tuple(self.traffic_ids),
            inherited_ad_views=tuple(sorted(self.inherited)),
            ad_displays=tuple(sorted(self.displays)),
        )


def _rendered_ads(template: ScreenTemplate) -> list[str]:
    return [v.id for v in template.ad_views if not v.load_failed]


class Explorer:
    """Explore one app model. Call :meth:`run` once."""

    def __init__(self, app: AppModel, cfg: ExplorationConfig | None = None) -> None:
        violations = validate_model(app)
        if violations:
            raise GraphValidationError(violations)
        self._app = app
        self._cfg = cfg or ExplorationConfig()
        self._events = 0
        self._current: str | None = None
        self._records: dict[str, _StateRecord] = {}
        self._transitions: list[Transition] = []
        self._edge_index: dict[tuple[str, str, str, str | None], int] = {}
        self._traffic: dict[str, TrafficRecord] = {}
        self._known = nx.DiGraph()  # screen name → screen, edge attr "action"

    # ------------------------------------------------------------------
    # Properties
    # ------------------------------------------------------------------

    @property
    def events_fired(self) -> int:
        return self._events

    @property
    def visited_screens(self) -> frozenset[str]:
        return frozenset(self._records)

    @property
    def elapsed(self) -> float:
        """Virtual seconds spent: events × transition_wait."""
        return self._events * self._cfg.transition_wait

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------

    def run(self) -> UTGraph:
        """Launch the app and explore until the budget or the frontier runs out."""
        self._launch()
        if self._cfg.strategy is Strategy.RANDOM:
            self._random_walk()
        else:
            self._ad_first()
        graph = self._graph()
        _LOGGER.debug(
            "%s: %s explored %d state(s), %d transition(s) with %d event(s) (%.0fs virtual)",
            self._app.package,
            self._cfg.strategy.value,
            len(graph.states),
            len(graph.transitions),
            self._events,
            self.elapsed,
        )
        return graph

    # ------------------------------------------------------------------
    # Strategies
    # ------------------------------------------------------------------

    def _ad_first(self) -> None:
        frontier: list[tuple[int, int, int, str, Action]] = []
        queued: set[tuple[str, Action]] = set()
        depth: dict[str, int] = {self._app.start: 0}
        first_of_activity: set[str] = set()
        seq = 0

        def enqueue(screen: str) -> None:
            nonlocal seq
            template = self._app.screens[screen]
            first = template.activity not in first_of_activity
            first_of_activity.add(template.activity)
            for action in self._actions(screen):
                if (screen, action) in queued:
                    continue
                queued.add((screen, action))
                priority = self._priority(screen, action, first)
                heapq.heappush(frontier, (priority, depth[screen], seq, screen, action))
                seq += 1

        enqueue(self._app.start)
        while frontier and self._has_budget():
            _, level, _, screen, action = heapq.heappop(frontier)
            if not self._goto(screen):
                break
            target = self._fire(action)
            if target is not None and target not in depth:
                depth[target] = level + 1
                enqueue(target)

    def _random_walk(self) -> None:
        rng = random.Random(self._cfg.seed)
        while self._has_budget():
            assert self._current is not None
            actions = self._actions(self._current)
            self._fire(rng.choice(actions))

    def _priority(self, screen: str, action: Action, first_of_activity: bool) -> int:
        if action.event in (EventType.BACK, EventType.APP_EXIT):
            return _AD_PRIORITY if first_of_activity else _PLAIN_PRIORITY
        if action.view_id is not None:
            node = self._tree(screen).nodes.get(action.view_id)
            if node is not None and looks_like_ad(node):
                return _AD_PRIORITY
        handler = self._app.handler(screen, action.view_id, action.event)
        if handler is not None and handler.target is not None:
            if self._app.screens[handler.target].ad_views:
                return _AD_PRIORITY
        return _PLAIN_PRIORITY

    # ------------------------------------------------------------------
    # Mechanics
    # ------------------------------------------------------------------

    def _has_budget(self) -> bool:
        return self._events < self._cfg.event_budget

    def _tree(self, screen: str) -> ViewTree:
        return build_view_tree(self._app.screens[screen], self._app.screen)

    def _actions(self, screen: str) -> list[Action]:
        template = self._app.screens[screen]
        if template.kind is StateKind.EXTERNAL:
            return [Action(EventType.APP_START)]
        actions = [
            Action(EventType.CLICK, v.id)
            for v in template.views
            if v.clickable and not v.load_failed
        ]
        for handler in self._app.handlers_for(screen):
            if handler.event is not EventType.CLICK:
                actions.append(Action(handler.event, handler.view_id))
        actions.append(Action(EventType.BACK))
        if self._app.home is not None:
            actions.append(Action(EventType.APP_EXIT))
        return actions

    def _launch(self) -> None:
        self._events += 1
        self._current = self._app.start
        self._enter(self._app.start, source=None, event=EventType.APP_START, index=None)

    def _goto(self, screen: str) -> bool:
        """Replay known transitions (restarting if needed) until ``screen`` is current.

        Returns False when the budget runs out first, including on arrival.
        """
        while self._current != screen:
            if not self._has_budget():
                return False
            assert self._current is not None
            try:
                path = nx.shortest_path(self._known, self._current, screen)
            except (nx.NetworkXNoPath, nx.NodeNotFound):
                self._fire(Action(EventType.APP_START))
                continue
            action: Action = self._known.edges[path[0], path[1]]["action"]
            self._fire(action)
        return self._has_budget()

    def _resolve(self, screen: str, action: Action) -> tuple[str, list[int]]:
        """Target screen and traffic specs (by index) of firing ``action``."""
        app = self._app
        template = app.screens[screen]
        if action.event is EventType.APP_START:
            return app.start, []
        if action.event is EventType.APP_EXIT:
            return app.home or screen, []
        if action.event is EventType.BACK:
            if template.back is not None:
                return template.back, []
            return app.home or screen, []
        handler = app.handler(screen, action.view_id, action.event)
        if handler is None:
            return screen, []
        return handler.target or screen, list(range(len(handler.traffic)))

    def _fire(self, action: Action) -> str | None:
        """Fire one event; return the new screen when a transition was recorded."""
        assert self._current is not None
        self._events += 1
        source = self._current
        target, traffic = self._resolve(source, action)
        if target == source and not traffic:
            return None

        event = InputEvent(action.event, action.view_id)
        source_id = self._records[source].id
        target_id = self._enter_id(target)
        transition = Transition(source_id, target_id, event)
        index = self._edge_index.get(transition.edge_key)
        if index is None:
            index = len(self._transitions)
            self._transitions.append(transition)
            self._edge_index[transition.edge_key] = index
            self._emit_traffic(source, action, traffic)
            if target != source:
                self._known.add_edge(source, target, action=action)
        self._current = target
        self._enter(target, source=source, event=action.event, index=index)
        return target

    def _enter_id(self, screen: str) -> str:
        record = self._records.get(screen)
        if record is None:
            record = _StateRecord(
                id=f"s{len(self._records)}",
                template=self._app.screens[screen],
                view_tree=self._tree(screen),
            )
            self._records[screen] = record
            self._known.add_node(screen)
        return record.id

    def _enter(
        self,
        screen: str,
        *,
        source: str | None,
        event: EventType,
        index: int | None,
    ) -> None:
        self._enter_id(screen)
        record = self._records[screen]
        template = record.template
        if source == screen:
            return
        carried = template.inherits_ads and event in NO_RELOAD_EVENTS
        if carried:
            assert source is not None
            prior = set(_rendered_ads(self._app.screens[source]))
            record.inherited.update(prior & set(_rendered_ads(template)))
        else:
            record.traces.update(ad_trace(v.ad_network) for v in template.ad_views if v.ad_network)
        if index is not None and _rendered_ads(template) and index not in record.displays:
            record.displays.append(index)

    def _emit_traffic(self, screen: str, action: Action, indices: list[int]) -> None:
        if not indices:
            return
        handler = self._app.handler(screen, action.view_id, action.event)
        assert handler is not None
        record = self._records[screen]
        for i in indices:
            spec = handler.traffic[i]
            traffic_id = f"t{len(self._traffic)}"
            self._traffic[traffic_id] = TrafficRecord(
                id=traffic_id,
                state_id=record.id,
                method=spec.method,
                url=spec.url,
                response_content_type=spec.content_type,
                response_length=spec.length,
                body_magic=spec.magic,
                user_initiated=spec.user_initiated,
                view_id=action.view_id,
            )
            record.traffic_ids.append(traffic_id)

    def _graph(self) -> UTGraph:
        meta = self._app.meta
        if meta.label is not None:
            shown = {
                record.id: tuple(_rendered_ads(record.template))
                for record in self._records.values()
                if _rendered_ads(record.template)
            }
            meta = dataclasses.replace(meta, label=dataclasses.replace(meta.label, ad_views=shown))
        return UTGraph(
            app=meta,
            screen=self._app.screen,
            states={r.id: r.freeze() for r in self._records.values()},
            transitions=tuple(self._transitions),
            traffic=dict(self._traffic),
        )


def explore(app: AppModel, cfg: ExplorationConfig | None = None) -> UTGraph:
    """Explore ``app`` and return its UI state transition graph."""
    return Explorer(app, cfg).run()


def ad_state_coverage(app: AppModel, visited: frozenset[str]) -> float:
    """Share of the model's ad-rendering screens among ``visited``."""
    ad_screens = {name for name, template in app.screens.items() if template.ad_views}
    if not ad_screens:
        return 1.0
    return len(ad_screens & visited) / len(ad_screens)
