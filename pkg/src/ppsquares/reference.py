"""Bundled reference data (hand-transcribed tables and golden report files)."""

import json
from functools import lru_cache
from importlib import resources


def _load(name):
    with resources.files("ppsquares.data").joinpath(name).open("r", encoding="utf-8") as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def reference_discriminants():
    """``{h: [D, ...]}`` for the exponent-2 discriminants with |D| <= 5500."""
    raw = _load("discriminants.json")["by_class_number"]
    return {int(h): tuple(ds) for h, ds in raw.items()}


@lru_cache(maxsize=None)
def reference_counts():
    """``{D: (h, #indecomposable, #fom_Q)}`` and the reference totals."""
    raw = _load("counts.json")
    rows = {r["disc"]: (r["h"], r["indecomposable"], r["fom_q"]) for r in raw["rows"]}
    return rows, raw["totals"]


@lru_cache(maxsize=None)
def reference_curves():
    return tuple(_load("curves.json")["rows"])


def golden_text(name):
    return resources.files("ppsquares.data").joinpath(name).read_text(encoding="utf-8")
