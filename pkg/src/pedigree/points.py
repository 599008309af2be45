"""JSON point files: {"n": 6, "coords": ["1/2", "0", ...], "label": "..."}.

coords may list every triangle including the base one (then it must be 1)
or leave the base coordinate out.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import comb
from pathlib import Path

from .core import CharVector, PedigreeError, coordinate_count, parse_fraction


def from_json(data: dict) -> tuple[CharVector, str | None]:
    try:
        n = int(data["n"])
        coords = [parse_fraction(c) for c in data["coords"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise PedigreeError(f"malformed point file: {exc}") from exc
    if n < 4:
        raise PedigreeError("n must be at least 4")
    if len(coords) == comb(n, 3):
        if coords[0] != 1:
            raise PedigreeError("the base triangle coordinate must be 1")
        coords = coords[1:]
    elif len(coords) != coordinate_count(n):
        raise PedigreeError(f"n={n} needs {coordinate_count(n)} or {comb(n, 3)} coordinates, got {len(coords)}")
    return CharVector(n, tuple(coords)), data.get("label")


def to_json(x: CharVector, label: str | None = None) -> dict:
    out = {"n": x.n, "coords": [str(Fraction(c)) for c in x.coords]}
    if label is not None:
        out["label"] = label
    return out


def load(path) -> tuple[CharVector, str | None]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise PedigreeError(f"{path}: not valid JSON ({exc})") from exc
    return from_json(data)


def save(path, x: CharVector, label: str | None = None):
    Path(path).write_text(json.dumps(to_json(x, label), indent=1) + "\n")
