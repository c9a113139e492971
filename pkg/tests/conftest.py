"""Shared fixtures: the bundled corpus and a clean environment."""

import pytest

from esmin.maps import EventMap
from esmin.textio import load_fixture, load_fixture_map


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("ESMIN_TRIPLE_CAP", "ESMIN_PARTITION_CAP", "ESMIN_LOG_LEVEL", "ESMIN_FIXTURE_DIR"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def es():
    """Load a structure from the corpus by name, e.g. ``es("p0")``; one instance per test."""
    cache = {}

    def load(name):
        if name not in cache:
            cache[name] = load_fixture(name)
        return cache[name]

    return load


@pytest.fixture
def fmap(es):
    """Load a map between two corpus structures, e.g. ``fmap("f02", "p0", "p2")``."""

    def load(name, source, target) -> EventMap:
        return load_fixture_map(name, es(source), es(target))

    return load
