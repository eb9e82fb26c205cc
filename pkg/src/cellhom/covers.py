"""Cellular maps, finite covers built from coset tables, and lifted inclusions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .cw import (RegularCW, closure_masks, incidence_signs, signed_chain_complex,
                 subcomplex_with_map)
from .equivariant import LiftedBoundaries, lifted_boundaries
from .fundamental_group import OmegaMap, _require_connected, omega_map
from .groups import CosetTable
from .morse import build_maximal_dvf


class NotSubcomplex(ValueError):
    pass


@dataclass
class CWMap:
    """Dimension-preserving cellular map; ``assignment[n][k]`` is the image of the ``n``-cell ``k``."""

    source: RegularCW
    target: RegularCW
    assignment: list[np.ndarray]

    def __post_init__(self):
        self.assignment = [np.asarray(a, dtype=np.int64) for a in self.assignment]
        while len(self.assignment) < self.source.dimension + 1:
            self.assignment.append(np.zeros(0, dtype=np.int64))

    def image(self, n: int, k: int) -> int:
        return int(self.assignment[n][k])

    def is_injective(self) -> bool:
        return all(len(np.unique(a)) == len(a) for a in self.assignment)

    def commutes_with_boundaries(self) -> bool:
        """Image of each boundary list equals the boundary list of the image, as sets."""
        for n in range(1, self.source.dimension + 1):
            sp_, si = self.source.csr(n)
            tp, ti = self.target.csr(n)
            a, b = self.assignment[n], self.assignment[n - 1]
            for k in range(self.source.nr_cells(n)):
                img = sorted(b[si[sp_[k]:sp_[k + 1]]].tolist())
                t = a[k]
                if img != sorted(ti[tp[t]:tp[t + 1]].tolist()):
                    return False
        return True

    def chain_map(self, n: int, src_signs=None, tgt_signs=None) -> sp.csr_matrix:
        """Matrix of the induced map on cellular ``n``-chains.

        A cell maps to ``+-`` its image; the sign compares the incidence of the
        source cell with its first face to that of the image with the image
        of that face.
        """
        S, T = self.source, self.target
        a = self.assignment[n] if n < len(self.assignment) else np.zeros(0, dtype=np.int64)
        m = S.nr_cells(n)
        if n == 0 or m == 0:
            vals = np.ones(m, dtype=np.int64)
        else:
            src_signs = src_signs or incidence_signs(S)
            tgt_signs = tgt_signs or incidence_signs(T)
            sp_, si = S.csr(n)
            tp, ti = T.csr(n)
            b = self.assignment[n - 1]
            vals = np.empty(m, dtype=np.int64)
            for k in range(m):
                f = b[si[sp_[k]]]
                t = a[k]
                row = ti[tp[t]:tp[t + 1]]
                r = int(np.flatnonzero(row == f)[0])
                vals[k] = int(src_signs[n][sp_[k]]) * int(tgt_signs[n][tp[t] + r])
        return sp.csr_matrix((vals, (a, np.arange(m))), shape=(T.nr_cells(n), m))

    def to_json(self) -> dict:
        return {"assignment": [[int(x) + 1 for x in a] for a in self.assignment]}


def inclusion(X: RegularCW, cells) -> CWMap:
    """Inclusion of the subcomplex on a closed set of cells."""
    Y, keep = subcomplex_with_map(X, cells)
    return CWMap(Y, X, keep)


def identity_map(X: RegularCW) -> CWMap:
    return CWMap(X, X, [np.arange(X.nr_cells(n)) for n in range(X.dimension + 1)])


def boundary_inclusion(Y: RegularCW) -> CWMap:
    """Inclusion of the closure of the 2-cells lying on exactly one 3-cell."""
    masks = [np.zeros(Y.nr_cells(n), dtype=bool) for n in range(Y.dimension + 1)]
    if Y.dimension >= 3:
        cp, _ = Y.coboundary_csr(2)
        masks[2] = np.diff(cp) == 1
    return inclusion(Y, closure_masks(Y, masks))


def lift_data(X: RegularCW) -> tuple[OmegaMap, LiftedBoundaries]:
    """Edge words and lifted boundary words of ``X`` for its default vector field (cached)."""
    if "lift" not in X._blists:
        _require_connected(X)
        V = build_maximal_dvf(X)
        signs = incidence_signs(X)
        omega = omega_map(X, V, signs)
        X._blists["lift"] = (omega, lifted_boundaries(X, omega, signs))
    return X._blists["lift"]


def _word_permutations(T: CosetTable, words, cache) -> np.ndarray:
    N = T.index
    gens = [np.asarray(p, dtype=np.int64) for p in T.action]
    inv = []
    for p in gens:
        q = np.empty_like(p)
        q[p] = np.arange(N)
        inv.append(q)
    out = np.empty((len(words), N), dtype=np.int64)
    for i, w in enumerate(words):
        got = cache.get(w)
        if got is None:
            got = np.arange(N)
            for x in w:
                got = gens[x - 1][got] if x > 0 else inv[-x - 1][got]
            cache[w] = got
        out[i] = got
    return out


def covering_cw(X: RegularCW, T: CosetTable, lifted: tuple[OmegaMap, LiftedBoundaries] | None = None) -> CWMap:
    """Covering map from the cover of ``X`` belonging to the coset table ``T``.

    ``T`` must be a table over ``pi1_presentation(X)`` (default vector field).
    The cover cell ``(e, c)`` has index ``e * index + c`` in its dimension;
    its boundary list pairs each face ``f`` of ``e`` with coset ``c * g``,
    where ``g`` is the lifted boundary word of ``f`` in ``e``.
    """
    omega, L = lifted if lifted is not None else lift_data(X)
    if T.generator_count != len(omega.generator_edges):
        raise ValueError("coset table does not belong to the presentation of this complex")
    N = T.index
    cache: dict = {}
    indptr, indices, assign = [], [], []
    for n in range(X.dimension + 1):
        p, idx = X.csr(n)
        m = X.nr_cells(n)
        lens = np.diff(p)
        ptr = np.zeros(m * N + 1, dtype=np.int64)
        np.cumsum(np.repeat(lens, N), out=ptr[1:])
        out = np.empty(len(idx) * N, dtype=np.int64)
        if n > 0 and len(idx):
            wid = L.word_ids[n]
            uniq, inv_ix = np.unique(wid, return_inverse=True)
            perms = _word_permutations(T, [L.table[int(u)] for u in uniq], cache)
            owner = np.repeat(np.arange(m), lens)
            local = np.arange(len(idx)) - p[owner]
            cs = np.arange(N)
            pos = (N * p[owner])[:, None] + cs[None, :] * lens[owner][:, None] + local[:, None]
            val = idx[:, None] * N + perms[inv_ix]
            out[pos.ravel()] = val.ravel()
        indptr.append(ptr)
        indices.append(out)
        assign.append(np.repeat(np.arange(m), N))
    cover = RegularCW(indptr, indices, {"covering_index": N})
    return CWMap(cover, X, assign)


def lifted_map(f: CWMap, p: CWMap) -> CWMap:
    """Inclusion of the full preimage ``p^-1(B)`` of the subcomplex ``f: B -> Y`` into the cover."""
    if not f.is_injective():
        raise NotSubcomplex("the map to lift is not an inclusion")
    if f.target is not p.target and f.target != p.target:
        raise NotSubcomplex("maps have different targets")
    masks = []
    for n in range(p.source.dimension + 1):
        img = np.zeros(p.target.nr_cells(n), dtype=bool)
        if n < len(f.assignment):
            img[f.assignment[n]] = True
        masks.append(img[p.assignment[n]])
    return inclusion(p.source, masks)


def compose(g: CWMap, f: CWMap) -> CWMap:
    """``g`` after ``f``."""
    return CWMap(f.source, g.target, [g.assignment[n][a] for n, a in enumerate(f.assignment)])


def homology_of_map(f: CWMap, n: int):
    """Induced map on degree-``n`` integral homology of a cellular map."""
    from .homology import induced_map

    A, B = signed_chain_complex(f.source), signed_chain_complex(f.target)
    sa, sb = A.signs, B.signs
    return induced_map(lambda k: f.chain_map(k, sa, sb) if 0 <= k <= f.source.dimension else None, A, B, n)
