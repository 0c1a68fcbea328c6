"""Seeded generator for labelled benchmark apps.

Every app shares one skeleton: a splash screen, a main screen with a menu,
a bottom banner and a scrollable feed, a detail page, an exit dialog, and
the launcher and browser outside the app. Clean apps keep the banner
compliant with every rule. Fraud apps apply one template per labelled
fraud type, with geometry drawn from ranges that clearly break the rule.
"""

from __future__ import annotations

import dataclasses
import logging
import random
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

from adsleuth.const import AD_NETWORKS, DEFAULT_SCREEN_HEIGHT, DEFAULT_SCREEN_WIDTH
from adsleuth.exceptions import BenchmarkError
from adsleuth.models import (
    AppLabel,
    AppMeta,
    Bounds,
    EventType,
    FraudType,
    Screen,
    StateKind,
)

from .model import AppModel, Handler, ScreenTemplate, TrafficSpec, ViewSpec

_LOGGER = logging.getLogger(__name__)

W = DEFAULT_SCREEN_WIDTH
H = DEFAULT_SCREEN_HEIGHT

LAUNCHER_ACTIVITY = "com.android.launcher3.Launcher"
BROWSER_ACTIVITY = "com.android.browser.BrowserActivity"
PERMISSIONS = ("android.permission.INTERNET", "android.permission.ACCESS_NETWORK_STATE")

# Default spread over 50 fraudulent apps; every type has at least four.
DEFAULT_DISTRIBUTION: dict[FraudType, int] = {
    FraudType.HIDDEN: 6,
    FraudType.SIZE: 5,
    FraudType.NUMBER: 4,
    FraudType.OVERLAP: 7,
    FraudType.INTERACTION: 7,
    FraudType.DRIVE_BY: 6,
    FraudType.OUTSIDE: 4,
    FraudType.FREQUENT: 5,
    FraudType.NON_CONTENT: 6,
}
DEFAULT_MULTI = 4  # apps that carry a second, drive-by or interaction, fraud

EXPLORATION_DISTRIBUTION: dict[FraudType, int] = {
    **{fraud: 2 for fraud in FraudType},
    FraudType.NON_CONTENT: 5,
}

_VENDORS = (
    "acme", "bluefin", "corvid", "ember", "fjord",
    "granite", "helix", "ionic", "juniper", "kestrel",
)
_PRODUCTS = (
    "notes", "weather", "puzzle", "music", "recipes",
    "tracker", "quiz", "flash", "wallpaper", "scanner",
)

_BANNER = Bounds(60, H - 150, W - 60, H)
_TOP_BANNER = Bounds(60, 0, W - 60, 150)
_INTERSTITIAL = Bounds(135, 520, 945, 1330)
# Below every menu button, so entering the screen from main overlaps no control.
_LOW_INTERSTITIAL = Bounds(40, 1180, W - 40, 1600)
_APK_MAGIC = "504B030414000800"
_HTML_MAGIC = "3C21444F43545950"


@dataclass
class _AppBuilder:
    """Mutable scratchpad for one app; frozen into an AppModel at the end."""

    package: str
    network: str
    rng: random.Random
    screens: dict[str, ScreenTemplate] = field(default_factory=dict)
    handlers: dict[tuple[str, str | None, EventType], Handler] = field(default_factory=dict)
    activities: set[str] = field(default_factory=set)

    @property
    def sdk(self) -> str:
        return AD_NETWORKS[self.network][0]

    def activity(self, name: str) -> str:
        qualified = f"{self.package}.{name}"
        self.activities.add(qualified)
        return qualified

    def put(self, template: ScreenTemplate) -> None:
        self.screens[template.name] = template

    def edit(self, name: str, **changes: object) -> None:
        self.screens[name] = dataclasses.replace(self.screens[name], **changes)  # type: ignore[arg-type]

    def views(self, name: str) -> tuple[ViewSpec, ...]:
        return self.screens[name].views

    def on(
        self,
        screen: str,
        event: EventType,
        view_id: str | None = None,
        target: str | None = None,
        traffic: tuple[TrafficSpec, ...] = (),
    ) -> None:
        handler = Handler(screen, event, view_id, target, traffic)
        self.handlers[handler.key] = handler

    def banner(self, view_id: str = "ad_banner", bounds: Bounds = _BANNER) -> ViewSpec:
        return ViewSpec(
            id=view_id,
            class_name=f"{self.sdk}.AdView",
            bounds=bounds,
            resource_id=view_id,
            clickable=True,
            ad_network=self.network,
        )

    def interstitial(self, view_id: str, bounds: Bounds = _INTERSTITIAL) -> ViewSpec:
        return ViewSpec(
            id=view_id,
            class_name=f"{self.sdk}.InterstitialAd",
            bounds=bounds,
            resource_id=view_id,
            clickable=True,
            floating=True,
            ad_network=self.network,
        )


def _button(view_id: str, bounds: Bounds, text: str = "") -> ViewSpec:
    return ViewSpec(view_id, "android.widget.Button", bounds, view_id, text, clickable=True)


def _text(view_id: str, bounds: Bounds, text: str = "") -> ViewSpec:
    return ViewSpec(view_id, "android.widget.TextView", bounds, view_id, text)


def _feed_items(count: int = 4) -> tuple[ViewSpec, ...]:
    return tuple(
        _text(f"item_{i}", Bounds(60, 200 + i * 300, W - 60, 460 + i * 300), f"Story {i + 1}")
        for i in range(count)
    )


def _menu_buttons(count: int) -> tuple[ViewSpec, ...]:
    slot = (1200 - 340) // count
    return tuple(
        _button(
            f"btn_menu_{i}",
            Bounds(90, 340 + i * slot, W - 90, 310 + (i + 1) * slot),
            f"Menu {i + 1}",
        )
        for i in range(count)
    )


def _skeleton(b: _AppBuilder, menu_count: int) -> None:
    main_activity = b.activity("MainActivity")
    b.put(
        ScreenTemplate(
            name="splash",
            activity=b.activity("SplashActivity"),
            kind=StateKind.LAUNCH,
            views=(
                ViewSpec("img_logo", "android.widget.ImageView", Bounds(340, 500, 740, 900), "img_logo"),
                ViewSpec(
                    "txt_continue",
                    "android.widget.TextView",
                    Bounds(240, 1300, 840, 1450),
                    "txt_continue",
                    "Tap to continue",
                    clickable=True,
                ),
            ),
        )
    )
    b.put(
        ScreenTemplate(
            name="main",
            activity=main_activity,
            kind=StateKind.CONTENT,
            views=(
                _text("txt_title", Bounds(60, 180, W - 60, 300), "Home"),
                *_menu_buttons(menu_count),
                ViewSpec("list_feed", "android.widget.ListView", Bounds(0, 1230, W, 1590), "list_feed"),
                b.banner(),
            ),
            back="exit_dialog",
        )
    )
    b.put(
        ScreenTemplate(
            name="feed",
            activity=main_activity,
            kind=StateKind.CONTENT,
            views=(*_feed_items(), b.banner()),
            back="main",
        )
    )
    b.put(
        ScreenTemplate(
            name="detail",
            activity=b.activity("DetailActivity"),
            kind=StateKind.CONTENT,
            views=(
                _text("txt_body", Bounds(60, 200, W - 60, 1200), "Details"),
                _button("btn_share", Bounds(90, 1300, W - 90, 1450), "Share"),
            ),
            back="main",
        )
    )
    b.put(
        ScreenTemplate(
            name="exit_dialog",
            activity=main_activity,
            kind=StateKind.EXIT,
            views=(
                _text("txt_exit_prompt", Bounds(140, 700, 940, 840), "Quit?"),
                _button("btn_exit_cancel", Bounds(140, 900, 520, 1040), "Cancel"),
                _button("btn_exit_confirm", Bounds(560, 900, 940, 1040), "Exit"),
            ),
            back="main",
        )
    )
    b.put(
        ScreenTemplate(
            name="launcher",
            activity=LAUNCHER_ACTIVITY,
            kind=StateKind.EXTERNAL,
            views=tuple(
                ViewSpec(
                    f"img_icon_{i}",
                    "android.widget.ImageView",
                    Bounds(100 + i * 240, 200, 280 + i * 240, 380),
                    f"img_icon_{i}",
                )
                for i in range(4)
            ),
        )
    )
    b.put(
        ScreenTemplate(
            name="browser",
            activity=BROWSER_ACTIVITY,
            kind=StateKind.EXTERNAL,
            views=(
                ViewSpec("edit_url", "android.widget.EditText", Bounds(0, 60, W, 180), "url_bar"),
                ViewSpec("web_page", "android.webkit.WebView", Bounds(0, 180, W, H), "web_page"),
            ),
        )
    )
    b.activities.add(f"{b.sdk}.AdActivity")

    b.on("splash", EventType.CLICK, "txt_continue", "main")
    for view in b.views("main"):
        if view.id.startswith("btn_menu_"):
            b.on("main", EventType.CLICK, view.id, "detail")
    b.on("main", EventType.SCROLL, "list_feed", "feed")
    b.on(
        "main",
        EventType.CLICK,
        "ad_banner",
        "browser",
        (
            TrafficSpec(
                url=f"https://click.{b.network}.example/landing?app={b.package}",
                content_type="text/html; charset=utf-8",
                length=b.rng.randint(4_000, 40_000),
                magic=_HTML_MAGIC,
                user_initiated=True,
            ),
        ),
    )
    b.on("exit_dialog", EventType.CLICK, "btn_exit_cancel", "main")
    b.on("exit_dialog", EventType.CLICK, "btn_exit_confirm", "launcher")


# ----------------------------------------------------------------------
# Fraud templates
# ----------------------------------------------------------------------


def _hidden(b: _AppBuilder) -> None:
    # An "Email" button drawn over a top banner, clear of main's controls.
    b.edit(
        "feed",
        views=(
            *_feed_items(),
            b.banner(bounds=_TOP_BANNER),
            _button("btn_email", Bounds(40, 0, W - 40, 170), "Email"),
        ),
    )


def _size(b: _AppBuilder) -> None:
    height = b.rng.randint(200, 260)  # ratio 0.113..0.146, policy cap 0.09
    b.edit("feed", views=(*_feed_items(), b.banner("ad_banner_wide", Bounds(0, H - height, W, H))))


def _scroll_page(b: _AppBuilder, views: tuple[ViewSpec, ...]) -> None:
    """A gallery scrolled to from the feed, which has no controls of its own."""
    b.put(
        ScreenTemplate(
            name="gallery",
            activity=b.screens["feed"].activity,
            kind=StateKind.CONTENT,
            views=(*views, b.banner()),
            back="feed",
        )
    )
    b.on("feed", EventType.SCROLL, None, "gallery")


def _number(b: _AppBuilder) -> None:
    half = b.rng.randint(420, 460)
    center = Bounds(W // 2 - half, 300, W // 2 + half, 1300)  # ~0.44..0.48 on its own
    _scroll_page(
        b,
        (
            _text("txt_caption", Bounds(60, 1330, W - 60, 1420), "Gallery"),
            b.banner("ad_top", _TOP_BANNER),
            b.interstitial("ad_center", center),
        ),
    )


def _overlap(b: _AppBuilder) -> None:
    # 2x2 grid of small buttons under one interstitial
    buttons = tuple(
        _button(f"btn_action_{i}", Bounds(left, top, left + 280, top + 260))
        for i, (left, top) in enumerate([(240, 600), (560, 600), (240, 900), (560, 900)])
    )
    _scroll_page(
        b,
        (*_feed_items(1), *buttons, b.interstitial("ad_overlay", Bounds(220, 560, 860, 1200))),
    )


def _interaction(b: _AppBuilder) -> None:
    # Cancelling the exit dialog pops an interstitial where its buttons were.
    main = b.screens["main"]
    b.put(
        ScreenTemplate(
            name="main_ad",
            activity=main.activity,
            kind=StateKind.CONTENT,
            views=(
                _text("txt_title", Bounds(60, 180, W - 60, 300), "Home"),
                b.banner(),
                b.interstitial("ad_interstitial"),
            ),
            back="exit_dialog",
        )
    )
    b.on("exit_dialog", EventType.CLICK, "btn_exit_cancel", "main_ad")


def _drive_by(b: _AppBuilder) -> None:
    b.on(
        "main",
        EventType.CLICK,
        "ad_banner",
        None,
        (
            TrafficSpec(
                url=f"http://dl.{b.network}.example/promo/{b.rng.randrange(10**6)}.apk",
                content_type="application/vnd.android.package-archive",
                length=b.rng.randint(1_000_000, 9_000_000),
                magic=_APK_MAGIC,
                user_initiated=False,
            ),
        ),
    )


def _outside(b: _AppBuilder) -> None:
    launcher = b.screens["launcher"]
    b.edit("launcher", views=(*launcher.views, b.banner("ad_home", _TOP_BANNER)))


def _frequent(b: _AppBuilder) -> None:
    b.put(
        ScreenTemplate(
            name="promo",
            activity=b.activity("PromoActivity"),
            kind=StateKind.CONTENT,
            views=(
                _text("txt_promo", Bounds(60, 200, W - 60, 400), "Today's picks"),
                _button("btn_close", Bounds(390, 450, 690, 580), "Close"),
                b.interstitial("ad_interstitial", _LOW_INTERSTITIAL),
            ),
            back="main",
        )
    )
    for view in b.views("main"):
        if view.id.startswith("btn_menu_"):
            b.on("main", EventType.CLICK, view.id, "promo")
    b.on("promo", EventType.CLICK, "btn_close", "main")


def _non_content(b: _AppBuilder, on_exit: bool) -> None:
    if on_exit:
        dialog = b.screens["exit_dialog"]
        b.edit(
            "exit_dialog",
            views=(*dialog.views, b.interstitial("ad_exit", _LOW_INTERSTITIAL)),
        )
        return
    # A full-screen ad right after the splash, nothing else on screen.
    b.put(
        ScreenTemplate(
            name="intro",
            activity=b.activity("IntroActivity"),
            kind=StateKind.CONTENT,
            views=(b.interstitial("ad_fullscreen", Bounds(0, 0, W, H)),),
            back="main",
        )
    )
    b.on("splash", EventType.CLICK, "txt_continue", "intro")
    b.on("intro", EventType.CLICK, "ad_fullscreen", "main")


_TEMPLATES: dict[FraudType, Callable[[_AppBuilder], None]] = {
    FraudType.HIDDEN: _hidden,
    FraudType.SIZE: _size,
    FraudType.NUMBER: _number,
    FraudType.OVERLAP: _overlap,
    FraudType.INTERACTION: _interaction,
    FraudType.DRIVE_BY: _drive_by,
    FraudType.OUTSIDE: _outside,
    FraudType.FREQUENT: _frequent,
}


# ----------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------


def _check_distribution(count_fraud: int, count_clean: int, distribution: Mapping[FraudType, int]) -> None:
    if count_fraud < 0 or count_clean < 0:
        raise BenchmarkError("app counts must be >= 0")
    negative = sorted(f.value for f, n in distribution.items() if n < 0)
    if negative:
        raise BenchmarkError(f"negative counts for {', '.join(negative)}")
    total = sum(distribution.values())
    if total != count_fraud:
        raise BenchmarkError(
            f"distribution sums to {total} but {count_fraud} fraudulent apps were requested"
        )


def even_distribution(count_fraud: int) -> dict[FraudType, int]:
    """Spread ``count_fraud`` apps round-robin over the fraud types."""
    types = list(FraudType)
    spread = dict.fromkeys(types, 0)
    for i in range(count_fraud):
        spread[types[i % len(types)]] += 1
    return spread


def _second_fraud(primary: FraudType) -> FraudType:
    return FraudType.INTERACTION if primary is FraudType.DRIVE_BY else FraudType.DRIVE_BY


def generate_benchmark(
    count_fraud: int = 50,
    count_clean: int = 50,
    distribution: Mapping[FraudType, int] | None = None,
    seed: int = 1,
    *,
    multi: int | None = None,
) -> list[AppModel]:
    """Generate ``count_fraud`` labelled fraudulent apps and ``count_clean`` clean ones.

    Without a distribution the default spread is used for 50 fraudulent
    apps and an even spread otherwise. The first ``multi`` fraudulent apps
    also carry a second fraud.

    Raises BenchmarkError when the distribution does not sum to count_fraud.
    """
    if distribution is None:
        distribution = DEFAULT_DISTRIBUTION if count_fraud == 50 else even_distribution(count_fraud)
    _check_distribution(count_fraud, count_clean, distribution)
    if multi is None:
        multi = min(DEFAULT_MULTI, count_fraud)

    rng = random.Random(seed)
    plan: list[tuple[FraudType, ...]] = [
        (fraud,) for fraud in FraudType for _ in range(distribution.get(fraud, 0))
    ]
    rng.shuffle(plan)
    plan = [
        tuple(sorted({p[0], _second_fraud(p[0])}, key=list(FraudType).index)) if i < multi else p
        for i, p in enumerate(plan)
    ]
    plan += [()] * count_clean

    networks = sorted(AD_NETWORKS)
    exit_variant = False
    models: list[AppModel] = []
    for index, frauds in enumerate(plan):
        app_rng = random.Random(f"{seed}:{index}")
        package = (
            f"com.{_VENDORS[index % len(_VENDORS)]}."
            f"{_PRODUCTS[(index // len(_VENDORS)) % len(_PRODUCTS)]}{index:03d}"
        )
        b = _AppBuilder(package=package, network=app_rng.choice(networks), rng=app_rng)
        menu_count = app_rng.randint(4, 6) if FraudType.FREQUENT in frauds else app_rng.randint(3, 4)
        _skeleton(b, menu_count)
        for fraud in frauds:
            if fraud is FraudType.NON_CONTENT:
                _non_content(b, exit_variant)
                exit_variant = not exit_variant
            else:
                _TEMPLATES[fraud](b)
        models.append(
            AppModel(
                meta=AppMeta(
                    package=package,
                    activities=tuple(sorted(b.activities)),
                    permissions=PERMISSIONS,
                    detected_ad_libs=(b.sdk,),
                    label=AppLabel(frauds=frauds, ad_network=b.network),
                ),
                screen=Screen(W, H),
                start="splash",
                screens=dict(b.screens),
                handlers=tuple(b.handlers.values()),
                home="launcher",
                ad_behaviors=tuple(f.value for f in frauds),
                seed=app_rng.randrange(2**31),
            )
        )
    _LOGGER.info(
        "Generated %d app(s): %d fraudulent, %d clean (seed %d)",
        len(models),
        count_fraud,
        count_clean,
        seed,
    )
    return models


def exploration_suite(seed: int = 7) -> list[AppModel]:
    """The 30-app suite used to compare exploration strategies."""
    return generate_benchmark(21, 9, EXPLORATION_DISTRIBUTION, seed, multi=0)
