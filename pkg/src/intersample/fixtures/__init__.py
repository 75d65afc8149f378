"""Bundled benchmark systems, one JSON file per system.

Each file follows the CLI input format and adds a "target_facet" hint naming
the polytope row the scenario was built around.  Access by stem:

    from intersample.fixtures import fixture_path, load_fixture
    spec, queries = load_fixture("double_integrator")
"""

from __future__ import annotations

import json
from importlib import resources

from ..verifier import QueryPoint, SystemSpec, load_system

__all__ = ["available", "fixture_path", "load_fixture", "load_fixture_raw", "target_facet"]


def available() -> list[str]:
    """Stems of every bundled system, sorted."""
    root = resources.files(__package__)
    return sorted(
        entry.name[: -len(".json")]
        for entry in root.iterdir()
        if entry.name.endswith(".json")
    )


def fixture_path(name: str) -> str:
    """Filesystem path of a bundled system; usable as a CLI argument."""
    path = resources.files(__package__) / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"no bundled system named {name!r}; have {available()}")
    return str(path)


def load_fixture_raw(name: str) -> dict:
    with open(fixture_path(name), "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_fixture(name: str) -> tuple[SystemSpec, list[QueryPoint]]:
    return load_system(load_fixture_raw(name))


def target_facet(name: str) -> int:
    """The facet row a bundled scenario exercises."""
    return int(load_fixture_raw(name)["target_facet"])
