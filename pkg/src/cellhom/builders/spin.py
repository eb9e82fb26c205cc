"""Spinning a complex about a subcomplex."""

from __future__ import annotations

import numpy as np

from ..covers import CWMap, NotSubcomplex
from ..cw import RegularCW, direct_product, from_boundaries, subcomplex


def disk() -> RegularCW:
    """Closed 2-disk with two vertices, two edges and one 2-cell."""
    return from_boundaries([[[], []], [[1, 2], [1, 2]], [[1, 2]]])


def spin(i: CWMap) -> RegularCW:
    """``(B x D^2) u (X x S^1)`` inside ``X x D^2`` for an inclusion ``i: B -> X``.

    Homotopy equivalent to ``X x [0,1]`` with ``B x [0,1]`` and
    ``X x {1}`` collapsed onto ``X x {0}``.
    """
    if not i.is_injective():
        raise NotSubcomplex("spinning needs the inclusion of a subcomplex")
    X = i.target
    D = disk()
    P = direct_product(X, D)
    in_b = []
    for n in range(X.dimension + 1):
        m = np.zeros(X.nr_cells(n), dtype=bool)
        if n < len(i.assignment):
            m[i.assignment[n]] = True
        in_b.append(m)
    masks = []
    for n in range(P.dimension + 1):
        parts = []
        for a in range(max(0, n - 2), min(n, X.dimension) + 1):
            b = n - a
            if b < 2:
                parts.append(np.ones(X.nr_cells(a) * D.nr_cells(b), dtype=bool))
            else:
                parts.append(np.repeat(in_b[a], D.nr_cells(b)))
        masks.append(np.concatenate(parts) if parts else np.zeros(0, dtype=bool))
    return subcomplex(P, masks)
