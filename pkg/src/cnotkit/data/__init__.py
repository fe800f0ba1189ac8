"""Bundled coupling graphs and worked-example circuits."""

from __future__ import annotations

from importlib import resources

from ..circuit import Circuit, parse_circuit


def fixture_names() -> list[str]:
    root = resources.files(__name__).joinpath("fixtures")
    return sorted(p.name[:-3] for p in root.iterdir() if p.name.endswith(".qc"))


def fixture_text(name: str) -> str:
    return resources.files(__name__).joinpath("fixtures", f"{name}.qc").read_text()


def load_fixture(name: str) -> Circuit:
    """Parse ``fixtures/<name>.qc``."""
    return parse_circuit(fixture_text(name))
