"""Discrete vector fields on regular CW-complexes and the Morse complex of critical cells."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .chains import IntChainComplex
from .cw import CellRef, RegularCW, incidence_signs


class InvalidField(ValueError):
    pass


@dataclass
class DiscreteVectorField:
    """Arrows ``s -> t`` with ``dim t = dim s + 1``.

    ``up[n][s]`` is the ``n``-cell an ``(n-1)``-cell ``s`` points to (or -1);
    ``down[n][t]`` is the ``(n-1)``-cell pointing to the ``n``-cell ``t`` (or -1).
    """

    up: list[np.ndarray]
    down: list[np.ndarray]

    @classmethod
    def empty(cls, X: RegularCW) -> "DiscreteVectorField":
        D = X.dimension
        up = [np.full(0, -1, dtype=np.int64)] + [np.full(X.nr_cells(n - 1), -1, dtype=np.int64) for n in range(1, D + 1)]
        down = [np.full(0, -1, dtype=np.int64)] + [np.full(X.nr_cells(n), -1, dtype=np.int64) for n in range(1, D + 1)]
        return cls(up, down)

    @classmethod
    def from_arrows(cls, X: RegularCW, arrows) -> "DiscreteVectorField":
        V = cls.empty(X)
        for s, t in arrows:
            s, t = CellRef(*s), CellRef(*t)
            if t.dim != s.dim + 1:
                raise InvalidField(f"arrow {s}->{t} does not raise dimension by one")
            if s.index not in set(X.boundary(t.dim, t.index).tolist()):
                raise InvalidField(f"{s} is not in the boundary of {t}")
            if V.up[t.dim][s.index] >= 0 or V.down[t.dim][t.index] >= 0 or V.is_paired(s) or V.is_paired(t):
                raise InvalidField(f"cell used by two arrows: {s}->{t}")
            V.up[t.dim][s.index] = t.index
            V.down[t.dim][t.index] = s.index
        return V

    def arrows(self) -> list[tuple[CellRef, CellRef]]:
        out = []
        for n in range(1, len(self.up)):
            for s in np.flatnonzero(self.up[n] >= 0):
                out.append((CellRef(n - 1, int(s)), CellRef(n, int(self.up[n][s]))))
        return out

    def __len__(self):
        return sum(int((u >= 0).sum()) for u in self.up[1:])

    def target(self, s: CellRef) -> CellRef | None:
        n = s.dim + 1
        if n < len(self.up) and self.up[n][s.index] >= 0:
            return CellRef(n, int(self.up[n][s.index]))
        return None

    def source(self, t: CellRef) -> CellRef | None:
        if 1 <= t.dim < len(self.down) and self.down[t.dim][t.index] >= 0:
            return CellRef(t.dim - 1, int(self.down[t.dim][t.index]))
        return None

    def is_paired(self, c: CellRef) -> bool:
        return self.target(c) is not None or self.source(c) is not None

    @property
    def vector_field(self):
        return self.up

    @property
    def inverse_vector_field(self):
        return self.down


class CriticalCells(list):
    """Per-dimension sorted lists of critical cell indices."""

    def counts(self) -> list[int]:
        return [len(c) for c in self]

    def total(self) -> int:
        return sum(self.counts())


def graded_order(X: RegularCW) -> Callable[[CellRef], tuple]:
    return lambda c: (c.dim, c.index)


def build_maximal_dvf(X: RegularCW, ordering: Callable[[CellRef], object] | None = None) -> DiscreteVectorField:
    """Maximal admissible field by repeatedly pairing a cell with its only free face.

    A cell is free to pair when it is the single potentially critical face of
    a potentially critical coface.  Among all such pairs the one whose face is
    least in ``ordering`` (default: dimension, then index) is taken, ties on
    the coface broken by least index.  When nothing pairs, the least
    potentially critical cell is declared critical.
    """
    D = X.dimension
    counts = [X.nr_cells(n) for n in range(D + 1)]
    offs = np.concatenate(([0], np.cumsum(counts))).tolist()
    total = offs[-1]
    if ordering is None:
        rank = list(range(total))
    else:
        cells = [CellRef(n, k) for n in range(D + 1) for k in range(counts[n])]
        keys = sorted(range(total), key=lambda g: ordering(cells[g]))
        rank = [0] * total
        for r, g in enumerate(keys):
            rank[g] = r
        for n in range(D):
            if counts[n] and counts[n + 1]:
                if max(rank[offs[n]:offs[n + 1]]) > min(rank[offs[n + 1]:offs[n + 2]]):
                    raise ValueError("ordering must place every k-cell before all (k+1)-cells")
    bnd = [X.boundary_lists(n) for n in range(D + 1)]
    cob = [X.coboundary_lists(n) for n in range(D + 1)]
    V = DiscreteVectorField.empty(X)
    up, down = V.up, V.down
    pc = [[True] * counts[n] for n in range(D + 1)]
    npc = [[len(b) for b in bnd[n]] if n else [0] * counts[n] for n in range(D + 1)]
    heap: list[tuple[int, int, int, int]] = []
    scan = sorted(range(total), key=rank.__getitem__)
    where = [(n, k) for n in range(D + 1) for k in range(counts[n])]
    pointer = 0

    def push_if_free(n, t):
        # t (an n-cell) has exactly one potentially critical face
        for s in bnd[n][t]:
            if pc[n - 1][s]:
                heapq.heappush(heap, (rank[offs[n - 1] + s], t, n, s))
                return

    def retire(n, k):
        pc[n][k] = False
        if n < D:
            for u in cob[n][k]:
                if pc[n + 1][u]:
                    npc[n + 1][u] -= 1
                    if npc[n + 1][u] == 1:
                        push_if_free(n + 1, u)

    remaining = total
    while remaining:
        while heap:
            _, t, n, s = heapq.heappop(heap)
            if not (pc[n][t] and pc[n - 1][s] and npc[n][t] == 1):
                continue
            up[n][s] = t
            down[n][t] = s
            retire(n - 1, s)
            retire(n, t)
            remaining -= 2
        if remaining:
            while not pc[where[scan[pointer]][0]][where[scan[pointer]][1]]:
                pointer += 1
            n, k = where[scan[pointer]]
            retire(n, k)
            remaining -= 1
    return V


def critical_cells(X: RegularCW, V: DiscreteVectorField) -> CriticalCells:
    out = CriticalCells()
    for n in range(X.dimension + 1):
        paired = np.zeros(X.nr_cells(n), dtype=bool)
        if n + 1 < len(V.up):
            paired |= V.up[n + 1] >= 0
        if 1 <= n < len(V.down):
            paired |= V.down[n] >= 0
        out.append(np.flatnonzero(~paired).tolist())
    return out


def check_field(X: RegularCW, V: DiscreteVectorField) -> None:
    """Raise :class:`InvalidField` unless ``V`` is a well-formed pairing on ``X``."""
    for n in range(1, len(V.up)):
        for s in np.flatnonzero(V.up[n] >= 0):
            t = V.up[n][s]
            if V.down[n][t] != s:
                raise InvalidField("up and down maps are not mutually inverse")
            if s not in set(X.boundary(n, t).tolist()):
                raise InvalidField(f"({n - 1},{s}) not in the boundary of ({n},{t})")
        if int((V.down[n] >= 0).sum()) != int((V.up[n] >= 0).sum()):
            raise InvalidField("up and down maps are not mutually inverse")
    for n in range(1, len(V.up) - 1):
        both = (V.down[n] >= 0) & (V.up[n + 1] >= 0)
        if both.any():
            raise InvalidField("a cell is involved in two arrows")


def is_admissible(X: RegularCW, V: DiscreteVectorField) -> bool:
    """True when the digraph of arrows has no circuit.

    There is an edge from ``s -> t`` to ``s' -> t'`` when ``s' != s`` lies in
    the boundary of ``t``.
    """
    check_field(X, V)
    for n in range(1, len(V.up)):
        bnd = X.boundary_lists(n)
        sources = np.flatnonzero(V.up[n] >= 0).tolist()
        up = V.up[n]
        indeg = {s: 0 for s in sources}
        succ: dict[int, list[int]] = {}
        for s in sources:
            nxt = [f for f in bnd[int(up[s])] if f != s and up[f] >= 0]
            succ[s] = nxt
            for f in nxt:
                indeg[f] += 1
        stack = [s for s, d in indeg.items() if d == 0]
        seen = 0
        while stack:
            s = stack.pop()
            seen += 1
            for f in succ[s]:
                indeg[f] -= 1
                if indeg[f] == 0:
                    stack.append(f)
        if seen != len(sources):
            return False
    return True


def flow_order(X: RegularCW, V: DiscreteVectorField, n: int) -> list[int]:
    """Source-type ``n``-cells ordered so that each precedes every cell its flow reaches."""
    if n + 1 >= len(V.up):
        return []
    up = V.up[n + 1]
    bnd = X.boundary_lists(n + 1)
    sources = np.flatnonzero(up >= 0).tolist()
    indeg = {s: 0 for s in sources}
    succ = {}
    for s in sources:
        succ[s] = [f for f in bnd[int(up[s])] if f != s and up[f] >= 0]
        for f in succ[s]:
            indeg[f] += 1
    stack = sorted((s for s, d in indeg.items() if d == 0), reverse=True)
    order = []
    while stack:
        s = stack.pop()
        order.append(s)
        for f in succ[s]:
            indeg[f] -= 1
            if indeg[f] == 0:
                stack.append(f)
    if len(order) != len(sources):
        raise InvalidField("vector field has a circuit")
    return order


def morse_chain_complex(X: RegularCW, V: DiscreteVectorField, signs=None) -> IntChainComplex:
    """Integer chain complex on the critical cells.

    Each boundary term on a source-type cell ``s`` (paired with ``t``) is
    replaced by the rest of ``-eps(t, s) * d(t)``; terms on target-type cells
    vanish.  The coefficient of a critical cell is thus the signed count of
    gradient paths, each path contributing the alternating product of
    incidence numbers along it.
    """
    if signs is None:
        signs = incidence_signs(X)
    crit = critical_cells(X, V)
    D = X.dimension
    pos = [{c: i for i, c in enumerate(crit[n])} for n in range(D + 1)]
    maps = {}
    for n in range(1, D + 1):
        flows = _integer_flows(X, V, signs, n - 1, pos[n - 1])
        p, idx = X.csr(n)
        sg = signs[n]
        rows, cols, vals = [], [], []
        for j, c in enumerate(crit[n]):
            acc: dict[int, int] = {}
            for r in range(p[c], p[c + 1]):
                f = int(idx[r])
                for i, v in flows[f].items():
                    acc[i] = acc.get(i, 0) + int(sg[r]) * v
            for i, v in acc.items():
                if v:
                    rows.append(i)
                    cols.append(j)
                    vals.append(v)
        maps[n] = sp.csr_matrix((vals, (rows, cols)), shape=(len(crit[n - 1]), len(crit[n])), dtype=np.int64)
    C = IntChainComplex([len(c) for c in crit] or [0], maps)
    C.properties["critical_cells"] = crit
    return C


def _integer_flows(X, V, signs, n, crit_pos):
    """For every ``n``-cell, its image under the Morse flow as ``{critical index: coefficient}``."""
    N = X.nr_cells(n)
    flows: list[dict[int, int] | None] = [None] * N
    for c, i in crit_pos.items():
        flows[c] = {i: 1}
    empty: dict[int, int] = {}
    if n >= 1 and n < len(V.down):
        for t in np.flatnonzero(V.down[n] >= 0).tolist():
            flows[t] = empty
    if n + 1 < len(V.up):
        up = V.up[n + 1]
        p, idx = X.csr(n + 1)
        sg = signs[n + 1]
        for s in reversed(flow_order(X, V, n)):
            t = int(up[s])
            rng = range(p[t], p[t + 1])
            eps = next(int(sg[r]) for r in rng if idx[r] == s)
            acc: dict[int, int] = {}
            for r in rng:
                f = int(idx[r])
                if f == s:
                    continue
                coef = -eps * int(sg[r])
                for i, v in flows[f].items():
                    acc[i] = acc.get(i, 0) + coef * v
            flows[s] = {i: v for i, v in acc.items() if v}
    return flows
