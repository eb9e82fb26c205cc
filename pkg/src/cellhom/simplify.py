"""Reduce the size of a regular CW-complex by merging cell pairs, keeping its homeomorphism type.

An ``n``-cell ``e`` lying on exactly two ``(n+1)``-cells ``t1, t2`` is
removed, and ``t1, t2`` are fused into one cell, whenever the fused cell is
again a ball: ``t1`` and ``t2`` have the same cofaces and their closures meet
exactly in the closure of ``e``.
"""

from __future__ import annotations

import random

import numpy as np

from .cw import RegularCW


class _Lattice:
    def __init__(self, X: RegularCW):
        self.top = X.dimension
        self.bnd: list[dict[int, set[int]]] = []
        self.cob: list[dict[int, set[int]]] = []
        for n in range(self.top + 1):
            self.bnd.append({k: set(b) for k, b in enumerate(X.boundary_lists(n))})
            self.cob.append({k: set() for k in range(X.nr_cells(n))})
        for n in range(1, self.top + 1):
            for k, b in self.bnd[n].items():
                for f in b:
                    self.cob[n - 1][f].add(k)

    def closure_size_below(self, n: int, cells: set[int]) -> list[set[int]]:
        """Proper faces of a set of ``n``-cells, dimension by dimension (top first)."""
        layers = []
        cur = cells
        for d in range(n, 0, -1):
            nxt: set[int] = set()
            for c in cur:
                nxt |= self.bnd[d][c]
            layers.append(nxt)
            cur = nxt
        return layers

    def mergeable(self, n: int, e: int):
        cof = self.cob[n][e]
        if len(cof) != 2:
            return None
        t1, t2 = sorted(cof)
        if n + 2 <= self.top and self.cob[n + 1][t1] != self.cob[n + 1][t2]:
            return None
        c1 = self.closure_size_below(n + 1, {t1})
        c2 = self.closure_size_below(n + 1, {t2})
        ce = self.closure_size_below(n, {e})
        # closure(t1) & closure(t2) must be closure(e): compare layer by layer
        if c1[0] & c2[0] != {e}:
            return None
        for a, b, c in zip(c1[1:], c2[1:], ce):
            if a & b != c:
                return None
        return t1, t2

    def merge(self, n: int, e: int, t1: int, t2: int) -> None:
        m = n + 1
        new = (self.bnd[m][t1] | self.bnd[m][t2]) - {e}
        for f in self.bnd[m][t2]:
            self.cob[n][f].discard(t2)
        for f in new:
            self.cob[n][f].add(t1)
        self.bnd[m][t1] = new
        del self.bnd[m][t2]
        if m + 1 <= self.top:
            for s in self.cob[m][t2]:
                self.bnd[m + 1][s].discard(t2)
        del self.cob[m][t2]
        for f in self.bnd[n][e]:
            self.cob[n - 1][f].discard(e)
        del self.bnd[n][e]
        del self.cob[n][e]

    def to_cw(self, properties=None) -> RegularCW:
        renumber = [{k: i for i, k in enumerate(sorted(d))} for d in self.bnd]
        indptr, indices = [], []
        for n, d in enumerate(self.bnd):
            keys = sorted(d)
            lens = [len(d[k]) if n else 0 for k in keys]
            ptr = np.zeros(len(keys) + 1, dtype=np.int64)
            np.cumsum(lens, out=ptr[1:])
            flat = [renumber[n - 1][f] for k in keys for f in sorted(d[k])] if n else []
            indptr.append(ptr)
            indices.append(np.asarray(flat, dtype=np.int64))
        return RegularCW(indptr, indices, properties)


def _run(X: RegularCW, rng) -> _Lattice:
    L = _Lattice(X)
    changed = True
    while changed:
        changed = False
        order = [(n, e) for n in range(L.top) for e in L.bnd[n]]
        if rng is not None:
            rng.shuffle(order)
        for n, e in order:
            if e not in L.bnd[n]:
                continue
            pair = L.mergeable(n, e)
            if pair is not None:
                L.merge(n, e, *pair)
                changed = True
    return L


def simplify(X: RegularCW, attempts: int = 5, seed: int | None = 0) -> RegularCW:
    """Merge cell pairs until no admissible pair is left.

    Each pass visits the cells in a shuffled order and passes repeat until
    nothing changes; the final size depends on the order, so ``attempts``
    orders (seeded by ``seed``) are tried and the smallest result is kept.
    ``seed=None`` scans by ascending dimension and index instead, once.
    The result is homeomorphic to ``X`` and never has more cells.
    """
    if seed is None:
        return _run(X, None).to_cw(X.properties)
    rng = random.Random(seed)
    best = None
    for _ in range(max(1, attempts)):
        L = _run(X, rng)
        size = sum(len(d) for d in L.bnd)
        if best is None or size < best[0]:
            best = (size, L)
    return best[1].to_cw(X.properties)
