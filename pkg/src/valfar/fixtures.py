"""Bundled case-study corpora."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def fixture_path(name: str) -> Path:
    """Path of a bundled file, e.g. ``fixture_path("toll.valfar")``."""
    return Path(str(resources.files("valfar") / "data" / name))
