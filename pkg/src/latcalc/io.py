"""Text and JSON forms of elements, bands, complex elements and reports."""
from __future__ import annotations

import json
from typing import Any

from .algebra import Element, ModelSpec, element
from .bands import Band
from .complexify import ComplexElement


def load_element(model: ModelSpec, data: Any) -> Element:
    """Accept a JSON string, a list, or a ``{"pieces": [...]}`` dict."""
    if isinstance(data, str):
        data = json.loads(data)
    return element(model, data)


def dump_element(x: Element):
    if x.model.is_atomic:
        return [float(v) for v in x.values]
    return {"pieces": [{"i": [lo, hi], "v": v} for (lo, hi), v in x.pieces()]}


def load_band(model: ModelSpec, data: Any) -> Band:
    if isinstance(data, str):
        data = json.loads(data)
    if "atoms" in data:
        return Band.atoms(model, data["atoms"])
    return Band.intervals(model, [tuple(iv) for iv in data["intervals"]])


def dump_band(b: Band):
    if b.model.is_atomic:
        return {"atoms": b.indices()}
    return {"intervals": [list(iv) for iv in b.dyadic_intervals()]}


def load_complex(model: ModelSpec, data: Any) -> ComplexElement:
    if isinstance(data, str):
        data = json.loads(data)
    return ComplexElement(load_element(model, data["re"]), load_element(model, data["im"]))


def dump_complex(z: ComplexElement):
    return {"re": dump_element(z.re), "im": dump_element(z.im)}


def load_model(data: Any) -> ModelSpec:
    """``{"kind": "atomic", "dim": 4}``, ``{"kind": "dyadic", "depth": 5}`` or ``"atomic:4"``."""
    if isinstance(data, str):
        return ModelSpec.parse(data)
    if data["kind"] == "atomic":
        return ModelSpec.atomic(int(data["dim"]))
    return ModelSpec.dyadic(int(data.get("depth", data.get("max_depth", data.get("maxDepth", 0)))))


def dump_model(m: ModelSpec):
    if m.is_atomic:
        return {"kind": "atomic", "dim": m.dim}
    return {"kind": "dyadic", "depth": m.max_depth}


def dumps(report: dict) -> str:
    """Canonical report text: stable key order, repr-exact floats."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
