"""Pinned line configurations shipped with the package."""

from __future__ import annotations

import json
from importlib import resources

from .io import config_from_json
from .lines3d import Configuration


def _load(name: str) -> tuple[Configuration, dict]:
    root = resources.files("skewlab") / "data"
    config = config_from_json(json.loads((root / f"{name}.json").read_text()))
    meta = json.loads((root / f"{name}.cert.json").read_text())
    return config, meta


def three_cycle() -> Configuration:
    """Three pairwise skew lines, none stacked over both others (trans = 2)."""
    return _load("three_cycle")[0]


def seven_lines() -> Configuration:
    """Seven skew lines whose largest stacked subset has size 3."""
    return _load("seven_lines")[0]


def certificate(name: str) -> tuple[Configuration, dict]:
    return _load(name)
