"""Face lattices of finite regular CW-complexes.

Cells are addressed by ``(dimension, index)``.  Inside Python, indices are
0-based; the JSON interchange format and the CLI use 1-based indices.  The
boundary of every ``n``-cell is stored in compressed sparse row form (one
``indptr``/``indices`` pair of integer arrays per dimension), which keeps
multi-million cell complexes such as fourfold products or their covers in
memory.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple

import numpy as np
import scipy.sparse as sp

from .chains import IntChainComplex


class MalformedLattice(ValueError):
    pass


class NotClosed(ValueError):
    pass


class CellRef(NamedTuple):
    dim: int
    index: int


def _index_dtype(n):
    return np.int32 if n < 2**31 - 1 else np.int64


class RegularCW:
    """Immutable face lattice of a finite regular CW-complex."""

    def __init__(self, indptr, indices, properties=None, validate=False):
        self._indptr = [np.asarray(p, dtype=np.int64) for p in indptr]
        self._indices = [np.asarray(i, dtype=np.int64) for i in indices]
        while len(self._indptr) > 1 and len(self._indptr[-1]) == 1:
            self._indptr.pop()
            self._indices.pop()
        if not self._indptr:
            self._indptr = [np.zeros(1, dtype=np.int64)]
            self._indices = [np.zeros(0, dtype=np.int64)]
        self.properties = dict(properties or {})
        self.properties["dimension"] = self.dimension
        self._blists = {}
        self._cob = {}
        if validate:
            self.validate()

    # -- basic queries -------------------------------------------------
    @property
    def dimension(self) -> int:
        n = len(self._indptr) - 1
        while n > 0 and self.nr_cells(n) == 0:
            n -= 1
        return n if self.nr_cells(0) or n > 0 else -1

    def nr_cells(self, n: int) -> int:
        if 0 <= n < len(self._indptr):
            return len(self._indptr[n]) - 1
        return 0

    def cell_counts(self) -> list[int]:
        return [self.nr_cells(n) for n in range(self.dimension + 1)]

    @property
    def size(self) -> int:
        return sum(self.nr_cells(n) for n in range(len(self._indptr)))

    def __len__(self):
        return self.size

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.nr_cells(n) for n in range(len(self._indptr)))

    def __repr__(self):
        return f"RegularCW(dimension={self.dimension}, cells={self.cell_counts()})"

    def csr(self, n: int):
        """``(indptr, indices)`` arrays of the boundaries of the ``n``-cells."""
        if 0 <= n < len(self._indptr):
            return self._indptr[n], self._indices[n]
        return np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64)

    def boundary(self, n: int, k: int) -> np.ndarray:
        p, i = self.csr(n)
        return i[p[k]:p[k + 1]]

    def boundary_lists(self, n: int) -> list[tuple[int, ...]]:
        if n not in self._blists:
            p, idx = self.csr(n)
            flat = idx.tolist()
            ptr = p.tolist()
            self._blists[n] = [tuple(flat[ptr[k]:ptr[k + 1]]) for k in range(len(ptr) - 1)]
        return self._blists[n]

    def coboundary_csr(self, n: int):
        """Transpose incidence: the ``(n+1)``-cells containing each ``n``-cell."""
        if n not in self._cob:
            p, idx = self.csr(n + 1)
            rows = np.repeat(np.arange(len(p) - 1), np.diff(p))
            order = np.argsort(idx, kind="stable")
            counts = np.bincount(idx, minlength=self.nr_cells(n))
            cp = np.zeros(self.nr_cells(n) + 1, dtype=np.int64)
            np.cumsum(counts, out=cp[1:])
            self._cob[n] = (cp, rows[order])
        return self._cob[n]

    def coboundary(self, n: int, k: int) -> np.ndarray:
        p, i = self.coboundary_csr(n)
        return i[p[k]:p[k + 1]]

    def coboundary_lists(self, n: int) -> list[tuple[int, ...]]:
        key = ("co", n)
        if key not in self._blists:
            p, idx = self.coboundary_csr(n)
            flat, ptr = idx.tolist(), p.tolist()
            self._blists[key] = [tuple(flat[ptr[k]:ptr[k + 1]]) for k in range(len(ptr) - 1)]
        return self._blists[key]

    def cells(self) -> Iterable[CellRef]:
        for n in range(self.dimension + 1):
            for k in range(self.nr_cells(n)):
                yield CellRef(n, k)

    def boundaries_1based(self) -> list[list[list[int]]]:
        return [[[a + 1 for a in b] for b in self.boundary_lists(n)]
                for n in range(self.dimension + 1)]

    # -- validation ----------------------------------------------------
    def validate(self, diamond: bool = True) -> None:
        """Check index ranges, edge regularity and (optionally) the diamond property."""
        for n in range(1, len(self._indptr)):
            p, idx = self.csr(n)
            lens = np.diff(p)
            if np.any(lens == 0):
                k = int(np.flatnonzero(lens == 0)[0])
                raise MalformedLattice(f"{n}-cell {k} has empty boundary")
            if idx.size and (idx.min() < 0 or idx.max() >= self.nr_cells(n - 1)):
                raise MalformedLattice(f"boundary index out of range in dimension {n}")
        if self.nr_cells(1):
            for k, b in enumerate(self.boundary_lists(1)):
                if len(b) != 2 or b[0] == b[1]:
                    raise MalformedLattice(f"edge {k} is not bounded by exactly 2 distinct vertices")
        for n in range(1, len(self._indptr)):
            for k, b in enumerate(self.boundary_lists(n)):
                if len(set(b)) != len(b):
                    raise MalformedLattice(f"{n}-cell {k} lists a face twice")
        if diamond:
            for n in range(2, len(self._indptr)):
                lower = self.boundary_lists(n - 1)
                for k, b in enumerate(self.boundary_lists(n)):
                    count: dict[int, int] = {}
                    for f in b:
                        for q in lower[f]:
                            count[q] = count.get(q, 0) + 1
                    if any(c != 2 for c in count.values()):
                        raise MalformedLattice(f"{n}-cell {k} violates the diamond condition")

    def __eq__(self, other):
        if not isinstance(other, RegularCW):
            return NotImplemented
        if self.cell_counts() != other.cell_counts():
            return False
        return all(self.boundary_lists(n) == other.boundary_lists(n)
                   for n in range(1, self.dimension + 1))

    __hash__ = object.__hash__


def from_boundaries(data, one_based: bool = True, properties=None, validate: bool = True) -> RegularCW:
    """Build a complex from per-dimension boundary lists.

    ``data[n][k]`` lists the ``(n-1)``-cells on the boundary of the ``k``-th
    ``n``-cell; ``data[0]`` only fixes the number of vertices.
    """
    shift = 1 if one_based else 0
    indptr, indices = [], []
    for n, cells in enumerate(data):
        lens = [len(c) if n > 0 else 0 for c in cells]
        p = np.zeros(len(cells) + 1, dtype=np.int64)
        np.cumsum(lens, out=p[1:])
        flat = [a - shift for c in cells for a in c] if n > 0 else []
        if n > 0:
            if any(a < 0 for a in flat) or any(a >= len(data[n - 1]) for a in flat):
                raise MalformedLattice(f"boundary index out of range in dimension {n}")
        indptr.append(p)
        indices.append(np.asarray(flat, dtype=np.int64))
    X = RegularCW(indptr, indices, properties)
    if validate:
        X.validate()
    return X


def point() -> RegularCW:
    return from_boundaries([[[]]])


def euler_characteristic(X: RegularCW) -> int:
    return X.euler_characteristic()


def size(X: RegularCW) -> int:
    return X.size


def dimension(X: RegularCW) -> int:
    return X.dimension


# -- products ------------------------------------------------------------

def direct_product(*factors: RegularCW) -> RegularCW:
    """Cartesian product of regular complexes.

    The ``n``-cells ``(e, f)`` are numbered lexicographically by
    ``(dim e, index e, index f)``; the boundary list of ``(e, f)`` is
    ``[(e', f) for e' in bd e] + [(e, f') for f' in bd f]``.  Several factors
    associate to the left.
    """
    if not factors:
        return point()
    X = factors[0]
    for Y in factors[1:]:
        X = _product2(X, Y)
    return X


def _product2(X: RegularCW, Y: RegularCW) -> RegularCW:
    dx, dy = X.dimension, Y.dimension
    nX = [X.nr_cells(p) for p in range(dx + 1)]
    nY = [Y.nr_cells(q) for q in range(dy + 1)]
    D = dx + dy
    offset = {}
    counts = []
    for n in range(D + 1):
        off = 0
        for p in range(max(0, n - dy), min(dx, n) + 1):
            offset[(n, p)] = off
            off += nX[p] * nY[n - p]
        counts.append(off)
    indptr, indices = [], []
    for n in range(D + 1):
        lens_blocks = []
        for p in range(max(0, n - dy), min(dx, n) + 1):
            q = n - p
            lx = np.diff(X.csr(p)[0]) if p > 0 else np.zeros(nX[p], dtype=np.int64)
            ly = np.diff(Y.csr(q)[0]) if q > 0 else np.zeros(nY[q], dtype=np.int64)
            lens_blocks.append((lx[:, None] + ly[None, :]).ravel())
        lens = np.concatenate(lens_blocks) if lens_blocks else np.zeros(0, dtype=np.int64)
        ptr = np.zeros(counts[n] + 1, dtype=np.int64)
        np.cumsum(lens, out=ptr[1:])
        out = np.empty(int(ptr[-1]), dtype=np.int64)
        if n > 0:
            for p in range(max(0, n - dy), min(dx, n) + 1):
                q = n - p
                base = offset[(n, p)]
                nq = nY[q]
                if p > 0:
                    xp, xi = X.csr(p)
                    lx = np.diff(xp)
                    owner = np.repeat(np.arange(nX[p]), lx)            # e of each face entry
                    rank_in_row = np.arange(len(xi)) - xp[owner]
                    fs = np.arange(nq)
                    rows = base + owner[:, None] * nq + fs[None, :]
                    pos = ptr[rows] + rank_in_row[:, None]
                    val = offset[(n - 1, p - 1)] + xi[:, None] * nq + fs[None, :]
                    out[pos.ravel()] = val.ravel()
                if q > 0:
                    yp, yi = Y.csr(q)
                    ly = np.diff(yp)
                    owner = np.repeat(np.arange(nq), ly)
                    rank_in_row = np.arange(len(yi)) - yp[owner]
                    es = np.arange(nX[p])
                    lxs = np.diff(X.csr(p)[0]) if p > 0 else np.zeros(nX[p], dtype=np.int64)
                    rows = base + es[:, None] * nq + owner[None, :]
                    pos = ptr[rows] + lxs[:, None] + rank_in_row[None, :]
                    val = offset[(n - 1, p)] + es[:, None] * nY[q - 1] + yi[None, :]
                    out[pos.ravel()] = val.ravel()
        indptr.append(ptr)
        indices.append(out)
    return RegularCW(indptr, indices)


def product_index(X: RegularCW, Y: RegularCW, e: CellRef, f: CellRef) -> CellRef:
    """Index in ``direct_product(X, Y)`` of the product cell ``e x f``."""
    n = e.dim + f.dim
    off = 0
    for p in range(max(0, n - Y.dimension), e.dim):
        off += X.nr_cells(p) * Y.nr_cells(n - p)
    return CellRef(n, off + e.index * Y.nr_cells(f.dim) + f.index)


# -- subcomplexes ----------------------------------------------------------

def _masks_from_cells(X: RegularCW, cells) -> list[np.ndarray]:
    if isinstance(cells, list) and cells and isinstance(cells[0], np.ndarray):
        return [np.asarray(m, dtype=bool).copy() for m in cells] + \
            [np.zeros(X.nr_cells(n), dtype=bool) for n in range(len(cells), X.dimension + 1)]
    masks = [np.zeros(X.nr_cells(n), dtype=bool) for n in range(X.dimension + 1)]
    for c in cells:
        n, k = c
        masks[n][k] = True
    return masks


def closure_masks(X: RegularCW, cells) -> list[np.ndarray]:
    """Downward closure, as one boolean mask per dimension."""
    masks = _masks_from_cells(X, cells)
    for n in range(X.dimension, 0, -1):
        sel = np.flatnonzero(masks[n])
        if sel.size:
            p, idx = X.csr(n)
            starts, ends = p[sel], p[sel + 1]
            lens = ends - starts
            flat = np.repeat(starts - np.concatenate(([0], np.cumsum(lens)[:-1])), lens) + np.arange(lens.sum())
            masks[n - 1][idx[flat]] = True
    return masks


def closure(X: RegularCW, cells) -> set[CellRef]:
    masks = closure_masks(X, cells)
    return {CellRef(n, int(k)) for n, m in enumerate(masks) for k in np.flatnonzero(m)}


def is_closed(X: RegularCW, masks) -> bool:
    full = closure_masks(X, masks)
    return all(np.array_equal(a, b) for a, b in zip(full, _masks_from_cells(X, masks)))


def subcomplex_with_map(X: RegularCW, cells) -> tuple[RegularCW, list[np.ndarray]]:
    """Subcomplex on a closed cell set plus, per dimension, the parent indices."""
    masks = _masks_from_cells(X, cells)
    if not is_closed(X, masks):
        raise NotClosed("cell set is not closed under taking faces")
    new_index = []
    keep = []
    for n, m in enumerate(masks):
        sel = np.flatnonzero(m)
        keep.append(sel)
        ni = np.full(X.nr_cells(n), -1, dtype=np.int64)
        ni[sel] = np.arange(sel.size)
        new_index.append(ni)
    indptr, indices = [], []
    for n, sel in enumerate(keep):
        p, idx = X.csr(n)
        lens = p[sel + 1] - p[sel]
        ptr = np.zeros(sel.size + 1, dtype=np.int64)
        np.cumsum(lens, out=ptr[1:])
        if n > 0 and sel.size:
            flat = np.repeat(p[sel] - ptr[:-1], lens) + np.arange(ptr[-1])
            indices.append(new_index[n - 1][idx[flat]])
        else:
            indices.append(np.zeros(0, dtype=np.int64))
        indptr.append(ptr)
    return RegularCW(indptr, indices), keep


def subcomplex(X: RegularCW, cells) -> RegularCW:
    return subcomplex_with_map(X, cells)[0]


def representative_vertices(X: RegularCW) -> list[np.ndarray]:
    """A vertex in the closure of every cell (the first vertex reached by first faces)."""
    reps = [np.arange(X.nr_cells(0))]
    for n in range(1, X.dimension + 1):
        p, idx = X.csr(n)
        reps.append(reps[-1][idx[p[:-1]]] if X.nr_cells(n) else np.zeros(0, dtype=np.int64))
    return reps


def vertex_components(X: RegularCW) -> tuple[int, np.ndarray]:
    nv = X.nr_cells(0)
    if nv == 0:
        return 0, np.zeros(0, dtype=np.int64)
    if X.nr_cells(1):
        from scipy.sparse.csgraph import connected_components

        p, idx = X.csr(1)
        a, b = idx[0::2], idx[1::2]
        G = sp.coo_matrix((np.ones(len(a)), (a, b)), shape=(nv, nv))
        return connected_components(G, directed=False)
    return nv, np.arange(nv)


def is_connected(X: RegularCW) -> bool:
    return vertex_components(X)[0] == 1


def path_components(X: RegularCW) -> list[tuple[RegularCW, list[np.ndarray]]]:
    """Path components, each with its per-dimension map back into ``X``."""
    ncomp, label = vertex_components(X)
    reps = representative_vertices(X)
    out = []
    for c in range(ncomp):
        masks = [label[r] == c for r in reps]
        out.append(subcomplex_with_map(X, masks))
    return out


# -- orientation ----------------------------------------------------------

class SignedChainComplexZ(IntChainComplex):
    """Cellular chain complex with incidence numbers in ``{-1, 0, +1}``.

    ``signs[n]`` is aligned with the boundary storage of the ``n``-cells.
    """

    signs: list[np.ndarray]


def incidence_signs(X: RegularCW) -> list[np.ndarray]:
    """Orientation signs aligned with each cell's boundary list.

    An edge ``[u, v]`` gets ``-1`` on ``u`` and ``+1`` on ``v``.  A higher cell
    gives ``+1`` to its first face; the others follow by walking across shared
    codimension-two faces, which must cancel in pairs.
    """
    signs = [np.zeros(0, dtype=np.int8)]
    if X.dimension >= 1:
        p, idx = X.csr(1)
        s = np.empty(len(idx), dtype=np.int8)
        s[0::2] = -1
        s[1::2] = 1
        signs.append(s)
    for n in range(2, X.dimension + 1):
        p, idx = X.csr(n)
        lower = X.boundary_lists(n - 1)
        lp = X.csr(n - 1)[0].tolist()
        lsign = signs[n - 1].tolist()
        ptr = p.tolist()
        flat = idx.tolist()
        out = [0] * len(flat)
        for k in range(len(ptr) - 1):
            faces = flat[ptr[k]:ptr[k + 1]]
            local = _face_signs(faces, lower, lp, lsign)
            out[ptr[k]:ptr[k + 1]] = local
        signs.append(np.asarray(out, dtype=np.int8))
    return signs


def _face_signs(faces, lower, lp, lsign):
    """Signs of one cell's faces by the pairwise cancellation rule."""
    m = len(faces)
    by_q: dict[int, list[tuple[int, int]]] = {}
    for t, f in enumerate(faces):
        base = lp[f]
        for r, q in enumerate(lower[f]):
            by_q.setdefault(q, []).append((t, lsign[base + r]))
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(m)]
    for q, lst in by_q.items():
        if len(lst) != 2:
            raise MalformedLattice("codimension-two face not shared by exactly two faces")
        (a, sa), (b, sb) = lst
        adj[a].append((b, sa, sb))
        adj[b].append((a, sb, sa))
    sign = [0] * m
    sign[0] = 1
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b, sa, sb in adj[a]:
            want = -sign[a] * sa * sb
            if sign[b] == 0:
                sign[b] = want
                queue.append(b)
            elif sign[b] != want:
                raise MalformedLattice("boundary of a cell is not orientable as a sphere")
    if 0 in sign:
        raise MalformedLattice("boundary of a cell is disconnected")
    return sign


def signed_chain_complex(X: RegularCW) -> SignedChainComplexZ:
    signs = incidence_signs(X)
    maps = {}
    for n in range(1, X.dimension + 1):
        p, idx = X.csr(n)
        cols = np.repeat(np.arange(X.nr_cells(n)), np.diff(p))
        maps[n] = sp.csr_matrix((signs[n].astype(np.int64), (idx, cols)),
                                shape=(X.nr_cells(n - 1), X.nr_cells(n)))
    C = SignedChainComplexZ([X.nr_cells(n) for n in range(X.dimension + 1)] or [0], maps)
    C.signs = signs
    return C


def cellular_homology(X: RegularCW, n: int | None = None):
    """Integral homology of ``X`` straight from the signed cellular complex."""
    from .homology import all_homology, homology

    C = signed_chain_complex(X)
    return all_homology(C) if n is None else homology(C, n)


def disjoint_union(*complexes: RegularCW) -> RegularCW:
    D = max(X.dimension for X in complexes)
    indptr, indices = [], []
    for n in range(D + 1):
        ptrs, idxs, off_cells, off_faces = [np.zeros(1, dtype=np.int64)], [], 0, 0
        for X in complexes:
            p, idx = X.csr(n)
            ptrs.append(p[1:] + off_cells)
            idxs.append(idx + off_faces)
            off_cells += int(p[-1])
            off_faces += X.nr_cells(n - 1) if n > 0 else 0
        indptr.append(np.concatenate(ptrs))
        indices.append(np.concatenate(idxs) if idxs else np.zeros(0, dtype=np.int64))
    return RegularCW(indptr, indices)
