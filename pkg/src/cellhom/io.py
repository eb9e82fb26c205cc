"""JSON reading and writing of complexes, arc presentations and cubical arrays.

A complex is stored as ``{"boundaries": B}`` where ``B[n][k]`` lists the
1-based indices of the ``(n-1)``-cells on the boundary of the ``k``-th
``n``-cell (``B[0]`` holds one empty list per vertex).
"""

from __future__ import annotations

import json
from pathlib import Path

from .cw import RegularCW, from_boundaries
from .builders.arcs import ArcPresentation, parse_arc
from .builders.cubical import PureCubical


def complex_to_json(X: RegularCW) -> dict:
    return {"dimension": X.dimension, "cells": X.cell_counts(), "boundaries": X.boundaries_1based()}


def complex_from_json(data) -> RegularCW:
    if isinstance(data, dict):
        data = data["boundaries"]
    return from_boundaries(data, one_based=True)


def _read(source):
    """Parse ``source`` as inline JSON, or as the path of a JSON file."""
    if isinstance(source, (dict, list)):
        return source
    text = str(source).strip()
    if text[:1] in "[{":
        return json.loads(text)
    return json.loads(Path(text).read_text())


def load_complex(source) -> RegularCW:
    return complex_from_json(_read(source))


def save_complex(X: RegularCW, path) -> None:
    Path(path).write_text(json.dumps(complex_to_json(X)))


def load_arc(source) -> ArcPresentation:
    return parse_arc(_read(source))


def load_cubical(source) -> PureCubical:
    return PureCubical.from_json(_read(source))
