"""Bundled benchmark networks in BIF format.

Structures follow the classic discrete benchmark networks (node, edge
and cardinality layout); the conditional probability tables are
synthetic, drawn once with a fixed seed and bounded away from 0 and 1
so sampled data stays informative. ``trace`` is a small ten-variable
network used throughout the test suite.
"""

from importlib import resources
from pathlib import Path

NAMES = ("trace", "collider_chain", "alarm", "insurance", "child", "child10")


def asset_path(name: str) -> Path:
    """Filesystem path of a bundled ``.bif`` network."""
    if name not in NAMES:
        raise KeyError(f"unknown bundled network {name!r}; have {NAMES}")
    return Path(resources.files(__package__) / f"{name}.bif")
