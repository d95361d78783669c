"""Named configurations used throughout the experiments."""

from __future__ import annotations

from typing import Union

from .algorithms import DynConfig, StaticConfig

DEFAULT_A = (3 / 2) ** 0.25

PRESETS: dict[str, Union[DynConfig, StaticConfig]] = {
    # classic self-adjusting setup: one-fifth success rule, F = 3/2
    "dyn-default": DynConfig(1.0, 1.0, 1.0, DEFAULT_A, 2 / 3),
    # tuned five-parameter configurations
    "dyn-C": DynConfig(0.45, 1.6, 1.0, 1.16, 0.7),
    "dyn-C2": DynConfig(0.5, 2.0, 0.5, DEFAULT_A, 2 / 3),
    # tuned static configurations (per dimension)
    "stat-1000": StaticConfig(5, 60, 7, 0.0143),
    "stat-500": StaticConfig(6, 49, 7, 0.0151),
}


def get_preset(name: str) -> Union[DynConfig, StaticConfig]:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ValueError(f"unknown preset {name!r}; available: {known}") from None
