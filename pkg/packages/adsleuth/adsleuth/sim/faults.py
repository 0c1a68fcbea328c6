"""Observation faults that make the detector err the way real devices do.

Two mechanisms: an ad SDK that logs its load call but never renders
(network failures, time-outs), and a scroll that keeps an ad on screen
without reloading it, so no load call is traced for the new state.
"""

from __future__ import annotations

import dataclasses
import logging
import random
from dataclasses import dataclass

from adsleuth.exceptions import ConfigError, GraphValidationError
from adsleuth.models import NO_RELOAD_EVENTS

from .model import AppModel, validate_model

_LOGGER = logging.getLogger(__name__)

AD_LOAD_FAILURE = "ad_load_failure"
INHERITED_AD = "inherited_ad"


@dataclass(frozen=True)
class FaultConfig:
    ad_load_failure_rate: float = 0.0
    inherited_ad_rate: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("ad_load_failure_rate", "inherited_ad_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ConfigError(f"{name} must be within [0, 1], got {rate}")

    @property
    def active(self) -> bool:
        return self.ad_load_failure_rate > 0 or self.inherited_ad_rate > 0


def fault_kind(fault: str) -> str:
    """``"ad_load_failure:ad_banner"`` → ``"ad_load_failure"``."""
    return fault.split(":", 1)[0]


def inject_faults(app: AppModel, cfg: FaultConfig) -> AppModel:
    """Return a copy of ``app`` with faults drawn per ad view and per scroll target.

    Labels are left alone. The draw depends only on the config seed and
    the package name. Raises GraphValidationError for an inconsistent model.
    """
    if not cfg.active:
        return app
    violations = validate_model(app)
    if violations:
        raise GraphValidationError(violations)
    rng = random.Random(f"{cfg.seed}:{app.package}")
    faults = list(app.faults)

    ad_ids = sorted({v.id for s in app.screens.values() for v in s.ad_views})
    failed = {view_id for view_id in ad_ids if rng.random() < cfg.ad_load_failure_rate}

    scroll_targets = {
        h.target for h in app.handlers if h.event in NO_RELOAD_EVENTS and h.target is not None
    }
    inheriting = {
        name
        for name in sorted(scroll_targets)
        if app.screens[name].ad_views and rng.random() < cfg.inherited_ad_rate
    }

    screens = {}
    for name, template in app.screens.items():
        views = tuple(
            dataclasses.replace(v, load_failed=True) if v.is_ad and v.id in failed else v
            for v in template.views
        )
        screens[name] = dataclasses.replace(
            template,
            views=views,
            inherits_ads=template.inherits_ads or name in inheriting,
        )
    faults += [f"{AD_LOAD_FAILURE}:{view_id}" for view_id in sorted(failed)]
    faults += [f"{INHERITED_AD}:{name}" for name in sorted(inheriting)]
    if len(faults) > len(app.faults):
        _LOGGER.debug("%s: injected %s", app.package, ", ".join(faults[len(app.faults) :]))
    return dataclasses.replace(app, screens=screens, faults=tuple(faults))
