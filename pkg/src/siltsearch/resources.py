"""Paths to data files shipped with the package."""

from importlib import resources
from pathlib import Path


def resource_path(name: str) -> Path:
    """Path of a bundled resource, e.g. ``resource_path("stopwords.txt")``."""
    return Path(str(resources.files("siltsearch") / "data" / name))


def fixture_path(name: str = "") -> Path:
    """Path inside the bundled evaluation fixture (corpus, queries, qrels, resources)."""
    return resource_path("fixture") / name if name else resource_path("fixture")
