"""Data models for adsleuth: frozen dataclasses for UI state transition graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction


class StateKind(Enum):
    LAUNCH = "launch"
    LOGIN = "login"
    CONTENT = "content"
    EXIT = "exit"
    ERROR = "error"
    THANKYOU = "thankyou"
    EXTERNAL = "external"


NON_CONTENT_KINDS: frozenset[StateKind] = frozenset(
    {StateKind.LAUNCH, StateKind.LOGIN, StateKind.EXIT, StateKind.ERROR, StateKind.THANKYOU}
)


class EventType(Enum):
    CLICK = "click"
    LONG_CLICK = "long_click"
    SCROLL = "scroll"
    DRAG = "drag"
    BACK = "back"
    APP_START = "app_start"
    APP_EXIT = "app_exit"


TOUCH_EVENTS: frozenset[EventType] = frozenset({EventType.CLICK, EventType.LONG_CLICK})
NO_RELOAD_EVENTS: frozenset[EventType] = frozenset({EventType.SCROLL, EventType.DRAG})


class HttpMethod(Enum):
    GET = "GET"
    POST = "POST"


class AdKind(Enum):
    BANNER = "banner"
    INTERSTITIAL = "interstitial"
    FULL_SCREEN = "full_screen"


class FraudType(Enum):
    HIDDEN = "hidden"
    SIZE = "size"
    NUMBER = "number"
    OVERLAP = "overlap"
    INTERACTION = "interaction"
    DRIVE_BY = "drive_by"
    OUTSIDE = "outside"
    FREQUENT = "frequent"
    NON_CONTENT = "non_content"


STATIC_FRAUDS: frozenset[FraudType] = frozenset(
    {FraudType.HIDDEN, FraudType.SIZE, FraudType.NUMBER, FraudType.OVERLAP}
)


class PayloadClass(Enum):
    APK_ARCHIVE = "apk_archive"
    GENERIC_BINARY = "generic_binary"
    MEDIA = "media"
    PAGE = "page"


@dataclass(frozen=True)
class Bounds:
    """Screen rectangle in physical pixels, origin top-left."""

    left: int
    top: int
    right: int
    bottom: int

    @property
    def width(self) -> int:
        return self.right - self.left

    @property
    def height(self) -> int:
        return self.bottom - self.top

    @property
    def area(self) -> int:
        return max(self.width, 0) * max(self.height, 0)

    def as_list(self) -> list[int]:
        return [self.left, self.top, self.right, self.bottom]


@dataclass(frozen=True)
class ViewNode:
    id: str
    class_name: str
    bounds: Bounds
    z: int
    resource_id: str = ""
    text: str = ""
    clickable: bool = False
    children: tuple[str, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class ViewTree:
    root: str
    nodes: dict[str, ViewNode] = field(default_factory=dict)


@dataclass(frozen=True)
class InputEvent:
    type: EventType
    view_id: str | None = None


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    event: InputEvent

    @property
    def edge_key(self) -> tuple[str, str, str, str | None]:
        """Identity of the edge; repeated traversals share it."""
        return (self.source, self.target, self.event.type.value, self.event.view_id)


@dataclass(frozen=True)
class UIState:
    """One node of the UTG: a snapshot of the rendered UI."""

    id: str
    activity: str
    kind: StateKind
    view_tree: ViewTree
    ad_load_traces: tuple[str, ...] = ()
    traffic_ids: tuple[str, ...] = ()
    # Views carried over a scroll/drag transition without an ad reload.
    inherited_ad_views: tuple[str, ...] = ()
    # Indices into UTGraph.transitions over which an ad display was seen.
    ad_displays: tuple[int, ...] = ()


@dataclass(frozen=True)
class Screen:
    width: int
    height: int

    @property
    def area(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class AppLabel:
    """Ground truth for benchmark corpora. Detection code never reads it."""

    frauds: tuple[FraudType, ...] = ()
    ad_network: str | None = None
    ad_views: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def fraudulent(self) -> bool:
        return bool(self.frauds)


@dataclass(frozen=True)
class AppMeta:
    package: str
    activities: tuple[str, ...]
    permissions: tuple[str, ...] = ()
    detected_ad_libs: tuple[str, ...] = ()
    label: AppLabel | None = None


@dataclass(frozen=True)
class TrafficRecord:
    """Summary of one HTTP request/response observed in a state."""

    id: str
    state_id: str
    method: HttpMethod
    url: str
    response_content_type: str = ""
    response_length: int = 0
    body_magic: str = ""  # first 8 body bytes, hex
    user_initiated: bool = False
    view_id: str | None = None


@dataclass(frozen=True)
class UTGraph:
    """UI state transition graph of one app. The first state is the start state."""

    app: AppMeta
    screen: Screen
    states: dict[str, UIState] = field(default_factory=dict)
    transitions: tuple[Transition, ...] = ()
    traffic: dict[str, TrafficRecord] = field(default_factory=dict)

    @property
    def start_state(self) -> UIState | None:
        return next(iter(self.states.values()), None)

    def incoming(self, state_id: str) -> list[tuple[int, Transition]]:
        return [(i, t) for i, t in enumerate(self.transitions) if t.target == state_id]

    def outgoing(self, state_id: str) -> list[tuple[int, Transition]]:
        return [(i, t) for i, t in enumerate(self.transitions) if t.source == state_id]


@dataclass(frozen=True)
class DetectedAd:
    view_id: str
    kind: AdKind


@dataclass(frozen=True)
class FraudFinding:
    type: FraudType
    state_ids: tuple[str, ...]
    view_ids: tuple[str, ...]
    message: str
    evidence: dict[str, float | int | str] = field(default_factory=dict)
    rule_config_hash: str = ""

    @property
    def sort_key(self) -> tuple[str, tuple[str, ...], tuple[str, ...]]:
        return (self.type.value, self.state_ids, self.view_ids)


@dataclass(frozen=True)
class FraudReport:
    """Per-app detection outcome."""

    package: str
    findings: tuple[FraudFinding, ...] = ()
    config_hash: str = ""
    analyzed: bool = True  # False when the prefilter short-circuited

    @property
    def fraudulent(self) -> bool:
        return bool(self.findings)

    @property
    def fraud_types(self) -> frozenset[FraudType]:
        return frozenset(f.type for f in self.findings)


@dataclass(frozen=True)
class DownloadEvent:
    traffic_id: str
    state_id: str
    payload_class: PayloadClass
    user_initiated: bool
    view_id: str | None = None


@dataclass(frozen=True)
class ConfusionMatrix:
    """Binary confusion counts with exact precision/recall."""

    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def precision(self) -> Fraction | None:
        predicted = self.tp + self.fp
        return Fraction(self.tp, predicted) if predicted else None

    @property
    def recall(self) -> Fraction | None:
        actual = self.tp + self.fn
        return Fraction(self.tp, actual) if actual else None

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: ConfusionMatrix) -> ConfusionMatrix:
        return ConfusionMatrix(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            tn=self.tn + other.tn,
            fn=self.fn + other.fn,
        )
