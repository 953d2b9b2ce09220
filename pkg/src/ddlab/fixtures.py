"""Frozen multiplier fixtures for the fingerprinting programs.

The packaged ``fixtures/multipliers.json`` is produced by
``scripts/make_fixtures.py`` running the reproducible multiplier search; the
tests and the experiment suites read the frozen copy instead of re-searching.
Each entry records the full search arguments alongside the result, so any
entry can be re-derived with ``zoo.search_good_multipliers``.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .errors import UsageError


@lru_cache(maxsize=1)
def load_multiplier_fixtures():
    """The parsed fixture file (cached)."""
    path = resources.files("ddlab").joinpath("fixtures/multipliers.json")
    with path.open("r", encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("version") != 1:
        raise UsageError("unsupported fixture file version")
    return data


def _entry(section, key):
    data = load_multiplier_fixtures()
    try:
        return data[section][str(key)]
    except KeyError:
        raise UsageError("no %s fixture for %r" % (section, key)) from None


def eq_multipliers(q):
    """Frozen multiplier entry for the dimension-preserving equality tester."""
    return _entry("eq", int(q))


def modp_multipliers(p):
    """Frozen multiplier entry for the recombined 0-mod-p weight tester."""
    return _entry("modp", int(p))


def recombined_eq_multipliers(q):
    """Frozen multiplier entry for the recombined equality tester."""
    return _entry("recombined_eq", int(q))
