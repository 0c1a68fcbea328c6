"""Detector and rule configuration with JSON loading and stable hashing."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Self

from .const import (
    AD_LOAD_SIGNATURES,
    AD_TYPE_CLASSES,
    AD_WHITELIST,
    DOWNLOAD_CONTENT_TYPES,
    FRAMEWORK_PACKAGES,
)
from .exceptions import ConfigError
from .models import AdKind, FraudType

Interval = tuple[float, float]


def _interval(value: Any) -> Interval:
    if not isinstance(value, list | tuple) or len(value) != 2:
        raise ConfigError(f"Expected [low, high], got {value!r}")
    low, high = (float(v) for v in value)
    return (low, high)


def _strings(value: Any) -> tuple[str, ...]:
    if not isinstance(value, list | tuple | set | frozenset):
        raise ConfigError(f"Expected a list of strings, got {value!r}")
    if not all(isinstance(v, str) for v in value):
        raise ConfigError(f"Expected a list of strings, got {value!r}")
    return tuple(value)


def _fraud_types(value: Any) -> frozenset[FraudType]:
    try:
        return frozenset(FraudType(v) for v in _strings(value))
    except ValueError as err:
        raise ConfigError(f"Unknown fraud type in {value!r}") from err


def _check_interval(name: str, interval: Interval) -> None:
    low, high = interval
    if not 0.0 <= low <= high <= 1.0:
        raise ConfigError(f"{name} must satisfy 0 <= low <= high <= 1, got {list(interval)}")


def _overlaps(a: Interval, b: Interval) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def _jsonable(value: Any) -> Any:
    if isinstance(value, frozenset | set):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, tuple | list):
        return [_jsonable(v) for v in value]
    if isinstance(value, FraudType):
        return value.value
    return value


class _JsonConfig:
    """Mixin: dict/JSON round-trip with unknown-key rejection."""

    _CONVERTERS: Mapping[str, Callable[[Any], Any]] = {}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Self:
        if not isinstance(data, Mapping):
            raise ConfigError(f"{cls.__name__} document must be an object")
        known = {f.name for f in dataclasses.fields(cls)}  # type: ignore[arg-type]
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown {cls.__name__} keys: {', '.join(unknown)}")
        kwargs: dict[str, Any] = {}
        for key, raw in data.items():
            convert = cls._CONVERTERS.get(key)
            try:
                kwargs[key] = convert(raw) if convert is not None else raw
            except (TypeError, ValueError) as err:
                raise ConfigError(f"{cls.__name__}.{key}: {err}") from err
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> Self:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as err:
            raise ConfigError(f"Cannot read {path}: {err}") from err
        except json.JSONDecodeError as err:
            raise ConfigError(
                f"{path}: invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}"
            ) from err
        return cls.from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        return {
            f.name: _jsonable(getattr(self, f.name))
            for f in dataclasses.fields(self)  # type: ignore[arg-type]
        }


@dataclass(frozen=True)
class AdFeatureConfig(_JsonConfig):
    """String, type and placement features for ad-view detection.

    The ratio intervals are the detection envelope: a view whose area ratio
    falls inside one is a placement candidate for that kind. Policy limits
    live in RuleConfig.
    """

    whitelist: frozenset[str] = AD_WHITELIST
    ad_type_classes: tuple[str, ...] = AD_TYPE_CLASSES
    framework_packages: tuple[str, ...] = FRAMEWORK_PACKAGES
    ad_load_signatures: tuple[str, ...] = AD_LOAD_SIGNATURES
    banner_ratio: Interval = (0.001, 0.16)
    interstitial_ratio: Interval = (0.17, 0.88)
    full_ratio: Interval = (0.89, 1.0)
    center_tolerance: float = 0.05  # fraction of screen width
    edge_band: float = 0.10  # fraction of screen height
    follow_inherited_ads: bool = False

    _CONVERTERS = {
        "whitelist": lambda v: frozenset(_strings(v)),
        "ad_type_classes": _strings,
        "framework_packages": _strings,
        "ad_load_signatures": _strings,
        "banner_ratio": _interval,
        "interstitial_ratio": _interval,
        "full_ratio": _interval,
        "center_tolerance": float,
        "edge_band": float,
        "follow_inherited_ads": bool,
    }

    def __post_init__(self) -> None:
        if not self.whitelist:
            raise ConfigError("whitelist must not be empty")
        bad = sorted(w for w in self.whitelist if w != w.lower() or "ad" not in w)
        if bad:
            raise ConfigError(f"whitelist entries must be lowercase words containing 'ad': {bad}")
        intervals = {
            "banner_ratio": self.banner_ratio,
            "interstitial_ratio": self.interstitial_ratio,
            "full_ratio": self.full_ratio,
        }
        for name, interval in intervals.items():
            _check_interval(name, interval)
        names = list(intervals)
        for i, first in enumerate(names):
            for second in names[i + 1 :]:
                if _overlaps(intervals[first], intervals[second]):
                    raise ConfigError(f"{first} and {second} overlap")
        if not 0.0 <= self.center_tolerance <= 1.0:
            raise ConfigError("center_tolerance must be within [0, 1]")
        if not 0.0 <= self.edge_band <= 1.0:
            raise ConfigError("edge_band must be within [0, 1]")

    def ratio_interval(self, kind: AdKind) -> Interval:
        return {
            AdKind.BANNER: self.banner_ratio,
            AdKind.INTERSTITIAL: self.interstitial_ratio,
            AdKind.FULL_SCREEN: self.full_ratio,
        }[kind]


@dataclass(frozen=True)
class RuleConfig(_JsonConfig):
    """Thresholds and switches for the fraud rules."""

    banner_size: Interval = (0.004, 0.09)
    interstitial_size: Interval = (0.2, 0.8)
    full_screen_size: Interval = (0.9, 1.0)
    number_area_cap: float = 0.5
    frequent_threshold: int = 3  # findings need strictly more displays
    non_content_hops: int = 1
    download_content_types: tuple[str, ...] = DOWNLOAD_CONTENT_TYPES
    enabled: frozenset[FraudType] = field(default_factory=lambda: frozenset(FraudType))

    _CONVERTERS = {
        "banner_size": _interval,
        "interstitial_size": _interval,
        "full_screen_size": _interval,
        "number_area_cap": float,
        "frequent_threshold": int,
        "non_content_hops": int,
        "download_content_types": _strings,
        "enabled": _fraud_types,
    }

    def __post_init__(self) -> None:
        _check_interval("banner_size", self.banner_size)
        _check_interval("interstitial_size", self.interstitial_size)
        _check_interval("full_screen_size", self.full_screen_size)
        if not 0.0 < self.number_area_cap <= 1.0:
            raise ConfigError("number_area_cap must be within (0, 1]")
        if self.frequent_threshold < 1:
            raise ConfigError("frequent_threshold must be >= 1")
        if self.non_content_hops < 1:
            raise ConfigError("non_content_hops must be >= 1")

    def size_interval(self, kind: AdKind) -> Interval:
        return {
            AdKind.BANNER: self.banner_size,
            AdKind.INTERSTITIAL: self.interstitial_size,
            AdKind.FULL_SCREEN: self.full_screen_size,
        }[kind]

    def without(self, *types: FraudType) -> RuleConfig:
        """Return a copy with the given rules disabled."""
        return dataclasses.replace(self, enabled=self.enabled - frozenset(types))


def config_hash(*configs: _JsonConfig) -> str:
    """Short stable digest identifying a configuration set."""
    canonical = json.dumps(
        [type(c).__name__ for c in configs] + [c.to_dict() for c in configs],
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]
