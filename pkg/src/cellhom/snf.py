"""Integer Smith normal form and abelian group bookkeeping.

Two elimination routes are provided.  :func:`smith_normal_form` works on a
dense matrix of Python integers and can return the unimodular transforms.
:func:`elementary_divisors` only needs the diagonal and works on a sparse
row dictionary, eliminating unit pivots first (which is where the bulk of
a cellular boundary matrix goes) and finishing the residue densely.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd

import numpy as np
import scipy.sparse as sp


class AbelianInvariants(tuple):
    """Invariant factors of a finitely generated abelian group.

    Stored GAP style: one ``0`` per free factor, followed by the torsion
    coefficients ``d > 1`` in divisibility order.  ``AbelianInvariants([2, 0, 4])``
    normalises to ``(0, 2, 4)``; ``[2, 3]`` normalises to ``(6,)``.
    """

    def __new__(cls, factors=()):
        factors = [abs(int(f)) for f in factors]
        free = sum(1 for f in factors if f == 0)
        torsion = _normalise_torsion([f for f in factors if f > 1])
        return super().__new__(cls, [0] * free + torsion)

    @property
    def free_rank(self) -> int:
        return sum(1 for f in self if f == 0)

    @property
    def torsion(self) -> list[int]:
        return [f for f in self if f != 0]

    def is_trivial(self) -> bool:
        return len(self) == 0

    def gap(self) -> str:
        if not self:
            return "[  ]"
        return "[ " + ", ".join(str(f) for f in self) + " ]"

    def human(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"AbelianInvariants({list(self)})"


def _normalise_torsion(torsion: list[int]) -> list[int]:
    # prime-power splitting is avoided: diagonal SNF does the regrouping
    if not torsion:
        return []
    diag = smith_normal_form([[d if i == j else 0 for j in range(len(torsion))]
                              for i, d in enumerate(torsion)]).diagonal
    return [d for d in diag if d > 1]


@dataclass
class SmithForm:
    """Diagonal ``d1 | d2 | ...`` of the nonzero invariant factors.

    When computed with ``transforms=True``, ``U @ M @ V`` equals the
    rectangular diagonal matrix with ``diagonal`` on its leading diagonal.
    """

    diagonal: list[int]
    shape: tuple[int, int]
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None
    U_inv: list[list[int]] | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def diagonal_matrix(self) -> list[list[int]]:
        m, n = self.shape
        D = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.diagonal):
            D[i][i] = d
        return D


def _as_rows(M) -> list[list[int]]:
    if sp.issparse(M):
        M = M.toarray()
    if isinstance(M, np.ndarray):
        return [[int(x) for x in row] for row in M.tolist()]
    return [[int(x) for x in row] for row in M]


def smith_normal_form(M, transforms: bool = False, shape=None) -> SmithForm:
    """Smith normal form of an integer matrix.

    Pivots on the entry of least absolute value.  With ``transforms=True`` the
    unimodular ``U``, ``V`` (and ``U_inv``) satisfying ``U M V = D`` are
    accumulated as well.
    """
    A = _as_rows(M)
    m = len(A)
    n = len(A[0]) if m else (shape[1] if shape else 0)
    if shape is not None:
        m, n = shape
    U = _identity(m) if transforms else None
    Ui = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        if transforms:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        ra, rs = A[dst], A[src]
        for j in range(n):
            if rs[j]:
                ra[j] += q * rs[j]
        if transforms:
            ua, us = U[dst], U[src]
            for j in range(m):
                if us[j]:
                    ua[j] += q * us[j]
            # inverse: column_src -= q * column_dst
            for row in Ui:
                if row[dst]:
                    row[src] -= q * row[dst]

    def add_col(dst, src, q):
        if q == 0:
            return
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if transforms:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                best = (abs(p), t, t)
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < best[0]:
                        best = (abs(A[i][t]), i, t)
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < best[0]:
                        best = (abs(A[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m if abs(p) != 1 else t + 1):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if transforms:
                U[t] = [-x for x in U[t]]
                for row in Ui:
                    row[t] = -row[t]
        diag.append(A[t][t])
        t += 1
    return SmithForm(diag, (m, n), U, V, Ui)


def _identity(k):
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def is_divisibility_chain(diag) -> bool:
    return all(d > 0 for d in diag) and all(b % a == 0 for a, b in zip(diag, diag[1:]))


def _sparse_rows(M) -> tuple[dict[int, dict[int, int]], int, int]:
    if sp.issparse(M):
        M = M.tocoo()
        rows: dict[int, dict[int, int]] = {}
        for i, j, v in zip(M.row.tolist(), M.col.tolist(), M.data.tolist()):
            if v:
                r = rows.setdefault(i, {})
                r[j] = r.get(j, 0) + int(v)
        return rows, M.shape[0], M.shape[1]
    A = _as_rows(M)
    m = len(A)
    n = len(A[0]) if m else 0
    rows = {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(A)}
    return {i: r for i, r in rows.items() if r}, m, n


def elementary_divisors(M) -> list[int]:
    """Nonzero invariant factors of ``M`` (length equals the rank).

    Unit pivots are eliminated first, cheapest row first, choosing inside a
    row the unit whose column is shortest.  Whatever survives is handed to
    the dense routine.
    """
    rows, _, _ = _sparse_rows(M)
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    version = {i: 0 for i in rows}
    heap = [(len(r), 0, i) for i, r in rows.items()]
    heapq.heapify(heap)
    stalled: set[int] = set()
    units = 0

    while heap:
        length, ver, i = heapq.heappop(heap)
        if i not in rows or version[i] != ver:
            continue
        r = rows[i]
        pivot = None
        for j, v in r.items():
            if v == 1 or v == -1:
                c = len(cols[j])
                if pivot is None or c < pivot[0]:
                    pivot = (c, j)
                    if c == 1:
                        break
        if pivot is None:
            stalled.add(i)
            continue
        j = pivot[1]
        p = r[j]
        for k in list(cols[j]):
            if k == i:
                continue
            rk = rows[k]
            f = rk[j] * p
            for jj, v in r.items():
                nv = rk.get(jj, 0) - f * v
                if nv:
                    if jj not in rk:
                        cols[jj].add(k)
                    rk[jj] = nv
                elif jj in rk:
                    del rk[jj]
                    cols[jj].discard(k)
            version[k] += 1
            stalled.discard(k)
            if rk:
                heapq.heappush(heap, (len(rk), version[k], k))
            else:
                del rows[k]
        for jj in r:
            cols[jj].discard(i)
        del rows[i]
        del cols[j]
        units += 1

    rest = [rows[i] for i in sorted(rows)]
    if not rest:
        return [1] * units
    used = sorted({j for r in rest for j in r})
    pos = {j: t for t, j in enumerate(used)}
    dense = [[0] * len(used) for _ in rest]
    for t, r in enumerate(rest):
        for j, v in r.items():
            dense[t][pos[j]] = v
    tail = smith_normal_form(dense).diagonal
    return [1] * units + tail


def matrix_rank(M) -> int:
    return len(elementary_divisors(M))


def kernel_basis(M, ncols: int | None = None) -> list[list[int]]:
    """Columns (returned as lists) spanning the integer kernel of ``M``."""
    A = _as_rows(M)
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    S = smith_normal_form(A, transforms=True)
    r = S.rank
    return [[S.V[i][j] for i in range(n)] for j in range(r, n)]


def solve_integer(M, b) -> list[int] | None:
    """Integer solution ``x`` of ``M x = b`` or ``None`` if there is none."""
    A = _as_rows(M)
    m = len(A)
    n = len(A[0]) if m else 0
    S = smith_normal_form(A, transforms=True)
    c = [sum(S.U[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        if i < S.rank:
            d = S.diagonal[i]
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return [sum(S.V[i][k] * y[k] for k in range(n)) for i in range(n)]


def cokernel_invariants(M, nrows: int | None = None) -> AbelianInvariants:
    """Invariants of ``Z^m / column span of M``."""
    A = _as_rows(M)
    m = len(A) if A else (nrows or 0)
    diag = elementary_divisors(A) if A and A[0] else []
    return AbelianInvariants([0] * (m - len(diag)) + diag)
