"""Shipped example graphs.  Regenerate with ``scripts/gen_fixtures.py``."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..plane import PlaneGraph, parse_pg


@dataclass(frozen=True)
class Fixture:
    name: str
    graph: PlaneGraph
    names: dict[str, int]
    description: str

    def __getitem__(self, label: str) -> int:
        return self.names[label]


def fixture_names() -> list[str]:
    root = resources.files(__name__)
    return sorted(p.name[:-3] for p in root.iterdir() if p.name.endswith(".pg"))


def fixture_text(name: str) -> str:
    return resources.files(__name__).joinpath(f"{name}.pg").read_text(encoding="utf-8")


def load_fixture(name: str) -> Fixture:
    G = parse_pg(fixture_text(name))
    names: dict[str, int] = {}
    desc = G.comments[0] if G.comments else name
    for c in G.comments:
        if c.startswith("names:"):
            for tok in c[len("names:"):].split():
                k, v = tok.split("=")
                names[k] = int(v)
    return Fixture(name, G, names, desc)
