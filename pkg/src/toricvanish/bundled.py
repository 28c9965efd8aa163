"""Bundled example fans used across the test suite and the command line."""

from __future__ import annotations

from importlib import resources

from .fan import load_fan

FIXTURE_NAMES = ("p1", "p2", "f3", "wps235", "mcm1", "mcm2", "surf8")


def fixture_path(name):
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
    return resources.files(__package__) / "fixtures" / f"{name}.json"


def load_fixture(name):
    return load_fan(fixture_path(name))
