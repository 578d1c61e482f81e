from __future__ import annotations

import importlib.util
from pathlib import Path

from dpflex.fixtures import fixture_names, fixture_text, load_fixture

ROOT = Path(__file__).resolve().parents[1]


def load_generator():
    spec = importlib.util.spec_from_file_location("gen_fixtures", ROOT / "scripts" / "gen_fixtures.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def test_shipped_fixtures_match_generator():
    built = load_generator().build_all()
    assert sorted(built) == fixture_names()
    for name, text in built.items():
        assert fixture_text(name) == text, name


def test_every_fixture_is_described_and_named():
    for name in fixture_names():
        F = load_fixture(name)
        assert F.description and F.description != name
        assert all(v in F.graph.vertices for v in F.names.values())
