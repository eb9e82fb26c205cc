"""Free chain complex of the universal cover over the group ring of the fundamental group.

Every cell ``e`` of the base lifts to a cell ``~e`` and its boundary is
written ``d(~e) = sum eps_i g_i ~f_i`` with words ``g_i`` in the generators
of the fundamental group.  An edge from ``u`` to ``v`` gets
``omega(e) ~v - ~u``.  For higher cells the first face gets the identity and
the remaining words are forced by requiring that the summands of
``d(d(~e))`` cancel in pairs.  The complex is then contracted along the
lifted vector field so only critical cells remain.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .cw import RegularCW, incidence_signs
from .fundamental_group import (FpPresentation, NotConnected, OmegaMap, _require_connected,
                                omega_map, pi1_presentation)
from .morse import DiscreteVectorField, build_maximal_dvf, critical_cells, flow_order
from .words import inverse, multiply


class MatchFailure(RuntimeError):
    pass


class WordTable:
    """Interned group words; ``words[0]`` is the identity."""

    def __init__(self):
        self.words: list[tuple[int, ...]] = [()]
        self._ids: dict[tuple[int, ...], int] = {(): 0}

    def intern(self, w) -> int:
        w = tuple(w)
        i = self._ids.get(w)
        if i is None:
            i = len(self.words)
            self._ids[w] = i
            self.words.append(w)
        return i

    def __getitem__(self, i) -> tuple[int, ...]:
        return self.words[i]

    def __len__(self):
        return len(self.words)


@dataclass
class LiftedBoundaries:
    """Signs and word ids aligned with the boundary storage of each dimension."""

    signs: list[np.ndarray]
    word_ids: list[np.ndarray]
    table: WordTable

    def word(self, n: int, pos: int) -> tuple[int, ...]:
        return self.table[int(self.word_ids[n][pos])]


def lifted_boundaries(X: RegularCW, omega: OmegaMap, signs=None) -> LiftedBoundaries:
    """Lift every boundary of ``X`` to the universal cover by summand matching."""
    if signs is None:
        signs = incidence_signs(X)
    table = WordTable()
    ids = [np.zeros(0, dtype=np.int64)]
    if X.dimension >= 1:
        w1 = np.zeros(2 * X.nr_cells(1), dtype=np.int64)
        w1[1::2] = [table.intern(w) for w in omega.words]
        ids.append(w1)
    for n in range(2, X.dimension + 1):
        p, idx = X.csr(n)
        lower = X.boundary_lists(n - 1)
        lp = X.csr(n - 1)[0].tolist()
        lsign = signs[n - 1].tolist()
        lword = ids[n - 1].tolist()
        flat, ptr = idx.tolist(), p.tolist()
        out = [0] * len(flat)
        for k in range(len(ptr) - 1):
            faces = flat[ptr[k]:ptr[k + 1]]
            out[ptr[k]:ptr[k + 1]] = match_boundary(faces, lower, lp, lsign, lword, table)
        ids.append(np.asarray(out, dtype=np.int64))
    return LiftedBoundaries(signs, ids, table)


def match_boundary(faces, lower, lp, lsign, lword, table: WordTable) -> list[int]:
    """Word ids for the faces of one cell, first face fixed to the identity.

    If faces ``f`` and ``f'`` share the codimension-two face ``q`` then
    ``g_f' = g_f g_(f,q) g_(f',q)^-1`` makes their contributions to ``q``
    cancel.  Faces are reached breadth first from the first one.
    """
    m = len(faces)
    by_q: dict[int, list[tuple[int, int]]] = {}
    for t, f in enumerate(faces):
        base = lp[f]
        for r, q in enumerate(lower[f]):
            by_q.setdefault(q, []).append((t, lword[base + r]))
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(m)]
    for lst in by_q.values():
        if len(lst) != 2:
            raise MatchFailure("codimension-two face not shared by exactly two faces")
        (a, wa), (b, wb) = lst
        adj[a].append((b, wa, wb))
        adj[b].append((a, wb, wa))
    words: list[tuple[int, ...] | None] = [None] * m
    words[0] = ()
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b, wa, wb in adj[a]:
            if words[b] is None:
                words[b] = multiply(words[a], table[wa], inverse(table[wb]))
                queue.append(b)
    if any(w is None for w in words):
        raise MatchFailure("boundary of a cell is disconnected")
    return [table.intern(w) for w in words]


@dataclass
class EquivariantBoundaryTerm:
    sign: int
    cell: int
    word: tuple[int, ...]


@dataclass
class EquivariantChainComplex:
    """Free ``ZG``-complex on the critical cells of a base complex.

    ``terms[n][k]`` maps ``(face index, word id)`` to an integer coefficient;
    words are stored once in ``elts``.  Cells are 0-based.
    """

    group: FpPresentation
    ranks: list[int]
    terms: list[list[dict[tuple[int, int], int]]]
    elts: WordTable
    properties: dict = field(default_factory=dict)

    def dimension(self, n: int) -> int:
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, n: int, k: int) -> list[EquivariantBoundaryTerm]:
        """Boundary of the ``k``-th free generator as signed terms (multiples repeated)."""
        out = []
        for (f, w), c in sorted(self.terms[n][k].items()):
            out.extend([EquivariantBoundaryTerm(1 if c > 0 else -1, f, self.elts[w])] * abs(c))
        return out

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "ranks": self.ranks,
            "boundaries": [[[[c, f + 1, list(self.elts[w])] for (f, w), c in sorted(t.items())]
                            for t in deg] for deg in self.terms],
        }


def universal_cover_chain_complex(X: RegularCW, V: DiscreteVectorField | None = None) -> EquivariantChainComplex:
    """Contracted free ``ZG``-complex of the universal cover of a connected complex."""
    _require_connected(X)
    if V is None:
        V = build_maximal_dvf(X)
    signs = incidence_signs(X)
    omega = omega_map(X, V, signs)
    P = pi1_presentation(X, V, omega)
    L = lifted_boundaries(X, omega, signs)
    C = contract(X, V, L, P)
    C.properties["omega"] = omega
    C.properties["lifted"] = L
    C.properties["vector_field"] = V
    return C


def lift_dvf(X: RegularCW, V: DiscreteVectorField) -> DiscreteVectorField:
    """The lifted field pairs ``g~s`` with ``g~t`` exactly when ``s -> t``; it is stored by its base arrows."""
    return V


def contract(X: RegularCW, V: DiscreteVectorField, L: LiftedBoundaries, P: FpPresentation) -> EquivariantChainComplex:
    """Algebraic Morse reduction over the group ring.

    A term ``c h ~s`` with ``s`` paired to ``t`` is traded for
    ``-c eps h g_(t,s)^-1 sum_(f != s) eps_f g_(t,f) ~f``; terms on target-type
    cells vanish and critical cells are kept.
    """
    crit = critical_cells(X, V)
    while len(crit) > 1 and not crit[-1]:
        crit.pop()
    table = L.table
    top = len(crit) - 1
    terms: list[list[dict]] = [[{} for _ in crit[0]]]
    for n in range(1, top + 1):
        flows = _word_flows(X, V, L, n - 1, crit[n - 1])
        p, idx = X.csr(n)
        sg, wid = L.signs[n], L.word_ids[n]
        deg = []
        for c in crit[n]:
            acc: dict[tuple[int, int], int] = {}
            for r in range(p[c], p[c + 1]):
                f = int(idx[r])
                e = int(sg[r])
                h = table[int(wid[r])]
                for (i, w), v in flows(f).items():
                    key = (i, table.intern(multiply(h, table[w])))
                    acc[key] = acc.get(key, 0) + e * v
            deg.append({k: v for k, v in acc.items() if v})
        terms.append(deg)
    return EquivariantChainComplex(P, [len(c) for c in crit], terms, table,
                                   {"critical_cells": crit})


def _word_flows(X, V, L, n, crit_n):
    """Memoized flow of each ``n``-cell to a group-ring combination of critical ``n``-cells."""
    table = L.table
    pos = {c: i for i, c in enumerate(crit_n)}
    memo: dict[int, dict] = {}
    targets = V.down[n] if 1 <= n < len(V.down) else None
    up = V.up[n + 1] if n + 1 < len(V.up) else None
    if up is not None:
        p, idx = X.csr(n + 1)
        sg, wid = L.signs[n + 1], L.word_ids[n + 1]
        for s in reversed(flow_order(X, V, n)):
            t = int(up[s])
            rng = range(p[t], p[t + 1])
            r0 = next(r for r in rng if idx[r] == s)
            eps = int(sg[r0])
            ginv = inverse(table[int(wid[r0])])
            acc: dict[tuple[int, int], int] = {}
            for r in rng:
                f = int(idx[r])
                if f == s:
                    continue
                sub = _flow_of(f, pos, targets, up, memo)
                if not sub:
                    continue
                pre = multiply(ginv, table[int(wid[r])])
                coef = -eps * int(sg[r])
                for (i, w), v in sub.items():
                    key = (i, table.intern(multiply(pre, table[w])))
                    acc[key] = acc.get(key, 0) + coef * v
            memo[s] = {k: v for k, v in acc.items() if v}
    return lambda f: _flow_of(f, pos, targets, up, memo)


_EMPTY: dict = {}


def _flow_of(f, pos, targets, up, memo):
    if f in pos:
        return {(pos[f], 0): 1}
    if targets is not None and targets[f] >= 0:
        return _EMPTY
    if up is not None and up[f] >= 0:
        return memo[f]
    raise MatchFailure(f"cell {f} is neither critical nor paired")
