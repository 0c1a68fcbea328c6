"""Constants bundled with adsleuth."""

from __future__ import annotations

from .models import StateKind

# Package prefixes of the 20 ad networks covered by the bundled corpus
# (network name → prefixes). Prefix matching stands in for library
# fingerprinting.
AD_NETWORKS: dict[str, tuple[str, ...]] = {
    "admob": ("com.google.ads", "com.google.android.gms.ads"),
    "appbrain": ("com.appbrain",),
    "waps": ("cn.waps",),
    "feiwo": ("com.feiwo",),
    "baiduad": ("com.baidu.mobads",),
    "anzhi": ("com.anzhi.ad",),
    "youmi": ("net.youmi",),
    "doodlemobile": ("com.doodlemobile",),
    "adsmogo": ("com.adsmogo",),
    "kugo": ("com.kuguo",),
    "adwhirl": ("com.adwhirl",),
    "dianjin": ("com.nd.dianjin",),
    "vpon": ("com.vpon",),
    "inmobi": ("com.inmobi",),
    "apperhand": ("com.apperhand",),
    "startapp": ("com.startapp",),
    "mobwin": ("com.tencent.mobwin",),
    "jumptap": ("com.jumptap",),
    "fyber": ("com.fyber",),
    "domob": ("cn.domob",),
}

AD_LIBRARY_PREFIXES: tuple[str, ...] = tuple(
    prefix for prefixes in AD_NETWORKS.values() for prefix in prefixes
)

# Any method inside an ad library package counts as an ad-load call.
AD_LOAD_SIGNATURES: tuple[str, ...] = tuple(f"{prefix}." for prefix in AD_LIBRARY_PREFIXES)

REQUIRED_PERMISSIONS: tuple[str, ...] = ("INTERNET", "ACCESS_NETWORK_STATE")
PERMISSION_PREFIX = "android.permission."

AD_TYPE_CLASSES: tuple[str, ...] = ("ImageView", "WebView", "ViewFlipper")

# Widget classes shipped with the platform. A fully qualified class outside
# these packages is a customized type, the way ad SDKs name their popups.
FRAMEWORK_PACKAGES: tuple[str, ...] = (
    "android.",
    "androidx.",
    "com.android.",
    "com.google.android.material.",
    "java.",
    "javax.",
    "kotlin.",
)

# English words that contain "ad" but say nothing about advertising.
AD_WHITELIST: frozenset[str] = frozenset(
    {
        "academy", "adapt", "adapter", "adapters", "adaptive", "add", "added",
        "adder", "adding", "addition", "additional", "address", "addresses",
        "adds", "adequate", "adhere", "adjacent", "adjust", "adjustable",
        "adjustment", "admin", "administrator", "admit", "adobe", "adopt",
        "adult", "advance", "advanced", "adventure", "adverb", "advice",
        "advise", "advisor", "ahead", "already", "arcade", "armada", "avocado",
        "badge", "badger", "badly", "balladry", "barricade", "bead", "blade",
        "bread", "broad", "broadband", "broadcast", "cadence", "cadet",
        "canada", "cascade", "cicada", "crusade", "dad", "daddy", "dead",
        "deadline", "decade", "download", "downloaded", "downloader",
        "downloading", "downloads", "dread", "facade", "fad", "fade", "fader",
        "gad", "gadget", "gadgets", "glad", "grad", "gradation", "grade",
        "gradient", "grading", "gradual", "graduate", "grenade",
        "hadron", "head", "header", "headers", "heading", "headline",
        "headphone", "headset", "homestead", "instead", "jade", "keypad",
        "lad", "ladder", "laden", "lady", "lead", "leader", "leaderboard",
        "leading", "lemonade", "load", "loaded", "loader", "loading", "loads",
        "mad", "madam", "made", "meadow", "monad", "nadir", "nomad", "notepad",
        "overhead", "overload", "pad", "padding", "paddle", "parade", "payload",
        "persuade", "pleading", "preload", "quad", "radar",
        "radial", "radiant", "radiation", "radical", "radio", "radius", "read",
        "readable", "reader", "readers", "reading", "readme", "reads", "ready",
        "roadmap", "road", "sad", "saddle", "salad", "shad", "shade",
        "shader", "shading", "shadow", "shadows", "spread",
        "spreadsheet", "squad", "stadium", "steady", "tad",
        "thread", "threading", "threads", "toad", "trade", "trader", "trading",
        "tradition", "traditional", "triad", "unread", "upgrade", "upload",
        "uploaded", "uploader", "uploading", "uploads", "wade",
    }
)

# Final class-name segments marking views users are tempted to click.
INTERACTIVE_CLASS_HINTS: tuple[str, ...] = (
    "Button",
    "Dialog",
    "CheckBox",
    "Switch",
    "Spinner",
)

DOWNLOAD_CONTENT_TYPES: tuple[str, ...] = (
    "application/vnd.android.package-archive",
    "application/octet-stream",
    "application/zip",
)

ZIP_MAGIC = "504B0304"
OCTET_STREAM = "application/octet-stream"

# Activity-name keywords used to tag states of ingested graphs.
KIND_KEYWORDS: dict[StateKind, tuple[str, ...]] = {
    StateKind.LAUNCH: ("splash", "launch", "welcome"),
    StateKind.LOGIN: ("login", "signin", "logon"),
    StateKind.EXIT: ("exit", "finish", "quit"),
    StateKind.ERROR: ("error", "crash"),
    StateKind.THANKYOU: ("thank",),
}

# Nexus 5, the reference device for the geometry constants.
DEFAULT_SCREEN_WIDTH = 1080
DEFAULT_SCREEN_HEIGHT = 1776
