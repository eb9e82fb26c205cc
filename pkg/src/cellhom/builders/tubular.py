"""Complement of a small open neighbourhood of a subcomplex.

Each cell of ``X`` outside ``Y`` is kept ("internal"); for each such cell
``e`` and each path component ``A`` of ``closure(e) & Y`` there is one extra
("external") cell of dimension ``dim e - 1``, the trace of ``e`` on the
boundary of the neighbourhood.
"""

from __future__ import annotations

import numpy as np

from ..covers import CWMap
from ..cw import (RegularCW, _masks_from_cells, cellular_homology, from_boundaries,
                  is_closed, representative_vertices, subcomplex)


class AssumptionViolated(ValueError):
    """Some piece ``closure(e) & Y`` is not contractible; subdivide ``X`` first."""


def _y_masks(X: RegularCW, Y) -> list[np.ndarray]:
    if isinstance(Y, CWMap):
        masks = [np.zeros(X.nr_cells(n), dtype=bool) for n in range(X.dimension + 1)]
        for n, a in enumerate(Y.assignment):
            masks[n][a] = True
        return masks
    return _masks_from_cells(X, Y)


def _components(X: RegularCW, cells: frozenset, rep) -> list[frozenset]:
    parent: dict[int, int] = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for n, k in cells:
        if n == 0:
            parent[k] = k
    for n, k in cells:
        if n == 1:
            a, b = (int(v) for v in X.boundary(1, k))
            parent[find(a)] = find(b)
    groups: dict[int, set] = {}
    for n, k in cells:
        groups.setdefault(find(int(rep[n][k])), set()).add((n, k))
    return [frozenset(g) for _, g in sorted(groups.items())]


def _contractible(X: RegularCW, A: frozenset) -> bool:
    """Connected with the homology of a point (a proxy for contractibility)."""
    sub = subcomplex(X, list(A))
    H = cellular_homology(sub)
    return list(H[0]) == [0] and all(len(list(h)) == 0 for h in H[1:])


def tubular_complement(X: RegularCW, Y, check: bool = True) -> RegularCW:
    """The complex ``W`` modelling ``X`` minus a small open neighbourhood of ``Y``.

    ``Y`` is a subcomplex given as an inclusion map, boolean masks or cells.
    Internal cells come first in each dimension, in the order of ``X``;
    external cells follow.  With ``check`` every piece ``A`` is tested to be
    connected and acyclic, raising :class:`AssumptionViolated` otherwise.
    """
    ym = _y_masks(X, Y)
    if not is_closed(X, ym):
        raise ValueError("Y is not a subcomplex")
    d = X.dimension
    rep = representative_vertices(X)
    empty: frozenset = frozenset()
    meet: list[list[frozenset]] = []          # closure(e) & Y per cell
    for n in range(d + 1):
        row = []
        for k in range(X.nr_cells(n)):
            acc = set()
            if ym[n][k]:
                acc.add((n, k))
            if n:
                for f in X.boundary(n, k):
                    acc |= meet[n - 1][int(f)]
            row.append(frozenset(acc) if acc else empty)
        meet.append(row)

    internal = [np.flatnonzero(~ym[n]) for n in range(d + 1)]
    new_index = [dict((int(k), i) for i, k in enumerate(internal[n])) for n in range(d + 1)]
    # external cells of dimension n-1 from internal n-cells
    ext: list[list[tuple[int, frozenset]]] = [[] for _ in range(d + 1)]
    ext_index: list[dict] = [dict() for _ in range(d + 1)]
    pieces: dict[tuple[int, int], list[frozenset]] = {}
    checked: dict[frozenset, bool] = {}
    for n in range(1, d + 1):
        for k in internal[n]:
            k = int(k)
            if not meet[n][k]:
                continue
            comps = _components(X, meet[n][k], rep)
            pieces[(n, k)] = comps
            for A in comps:
                if check:
                    ok = checked.get(A)
                    if ok is None:
                        ok = checked[A] = _contractible(X, A)
                    if not ok:
                        raise AssumptionViolated(f"closure of {n}-cell {k} meets Y in a non-contractible piece")
                pos = len(internal[n - 1]) + len(ext[n - 1])
                ext_index[n - 1][(k, A)] = pos
                ext[n - 1].append((k, A))

    data = []
    for m in range(d + 1):
        rows = []
        for k in internal[m]:
            k = int(k)
            if m == 0:
                rows.append([])
                continue
            b = [new_index[m - 1][int(f)] for f in X.boundary(m, k) if not ym[m - 1][int(f)]]
            b += [ext_index[m - 1][(k, A)] for A in pieces.get((m, k), [])]
            rows.append(b)
        for k, A in ext[m]:
            # f^{e}_A with dim e = m + 1: faces f^{e'}_B, e' a face of e, B inside A
            b = []
            if m > 0:
                for f in X.boundary(m + 1, k):
                    f = int(f)
                    if ym[m][f]:
                        continue
                    for B in pieces.get((m, f), []):
                        if B <= A:
                            b.append(ext_index[m - 1][(f, B)])
            rows.append(b)
        data.append(rows)
    while len(data) > 1 and not data[-1]:
        data.pop()
    return from_boundaries(data, one_based=False, properties={"internal_counts": [len(i) for i in internal]})
