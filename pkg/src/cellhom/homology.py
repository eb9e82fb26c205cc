"""(Co)homology of integer complexes, induced maps and cokernels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .chains import IntChainComplex, NotAComplex
from .snf import (AbelianInvariants, _as_rows, cokernel_invariants,
                  elementary_divisors, smith_normal_form)


class NotChainMap(ValueError):
    pass


def _divisors(C: IntChainComplex, k: int) -> list[int]:
    if k not in C._divisors:
        M = C.differential(k)
        C._divisors[k] = elementary_divisors(M) if M.nnz else []
    return C._divisors[k]


def homology(C: IntChainComplex, n: int) -> AbelianInvariants:
    """Homology in degree ``n`` (cohomology when ``C`` is a cochain complex)."""
    if n < 0 or n >= len(C.ranks):
        return AbelianInvariants()
    if C.has_relations():
        return HomologyGroup(C, n).invariants
    inc = n - 1 if C.cochain else n + 1
    out_rank = len(_divisors(C, n))
    in_div = _divisors(C, inc) if 0 <= inc < len(C.ranks) else []
    free = C.rank(n) - out_rank - len(in_div)
    if free < 0:
        raise NotAComplex(f"ranks inconsistent in degree {n}")
    return AbelianInvariants([0] * free + [d for d in in_div if d > 1])


def cohomology(C: IntChainComplex, n: int) -> AbelianInvariants:
    if not C.cochain:
        raise ValueError("cohomology expects a cochain complex")
    return homology(C, n)


def betti_numbers(C: IntChainComplex) -> list[int]:
    return [homology(C, n).free_rank for n in range(len(C.ranks))]


def all_homology(C: IntChainComplex) -> list[AbelianInvariants]:
    return [homology(C, n) for n in range(len(C.ranks))]


def _matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact integer product, in int64 when the entries are small enough to rule out overflow."""
    if A.size == 0 or B.size == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=object)
    a = max(abs(int(A.max())), abs(int(A.min())))
    b = int(np.abs(B).sum(axis=0).max())
    if a * b < 2 ** 62:
        return (A.astype(np.int64) @ B.astype(np.int64)).astype(object)
    return A.astype(object).dot(B.astype(object))


class _LatticeSolver:
    """Solve ``B y = x`` for a full-column-rank integer matrix ``B``."""

    def __init__(self, B: list[list[int]], nrows: int):
        self.m = nrows
        self.r = len(B[0]) if B else 0
        self.S = smith_normal_form(B, transforms=True, shape=(nrows, self.r)) if self.r else None
        if self.S is not None:
            self.U = np.array(self.S.U, dtype=object).reshape(nrows, nrows)
            self.V = np.array(self.S.V, dtype=object).reshape(self.r, self.r)
            self.d = np.array(self.S.diagonal, dtype=object)

    def solve_many(self, X: np.ndarray) -> np.ndarray:
        """Columns of ``X`` in terms of the columns of ``B``; raises if one is outside the lattice."""
        X = np.asarray(X, dtype=object).reshape(self.m, -1)
        if self.r == 0:
            if X.any():
                raise ValueError("vector outside lattice")
            return np.zeros((0, X.shape[1]), dtype=object)
        c = _matmul(self.U, X)
        head = c[:self.r]
        if (head % self.d[:, None]).any() or c[self.r:].any():
            raise ValueError("vector outside lattice")
        return _matmul(self.V, head // self.d[:, None])

    def solve(self, x) -> list[int]:
        return [int(v) for v in self.solve_many(np.asarray(x, dtype=object).reshape(-1, 1))[:, 0]]


def _column_lattice_basis(cols: list[list[int]], m: int) -> list[list[int]]:
    """Basis (as a list of columns) of the lattice spanned by ``cols``."""
    if not cols:
        return []
    A = [[cols[j][i] for j in range(len(cols))] for i in range(m)]
    S = smith_normal_form(A, transforms=True)
    return [[S.U_inv[i][t] * S.diagonal[t] for i in range(m)] for t in range(S.rank)]


def _hstack_rows(*mats, m):
    rows = [[] for _ in range(m)]
    for M in mats:
        for i in range(m):
            rows[i].extend(M[i] if M else [])
    return rows


class HomologyGroup:
    """Homology in one degree together with explicit cycle generators.

    ``generators[i]`` is a cycle of order ``orders[i]`` (``0`` for infinite
    order) and :meth:`coordinates` expresses any cycle in those generators.
    Generators come from the Smith transform of the boundary coordinates
    inside a basis of the cycle lattice, so matrices built from them are
    reproducible.
    """

    def __init__(self, C: IntChainComplex, n: int):
        self.degree = n
        m = C.rank(n)
        self.m = m
        inc = n - 1 if C.cochain else n + 1
        tgt = n + 1 if C.cochain else n - 1
        out = _as_rows(C.differential(n).toarray()) if C.rank(tgt) else []
        R_tgt = C.relation_matrix(tgt).tolist() if C.rank(tgt) else []
        R_here = C.relation_matrix(n).tolist()
        inc_m = _as_rows(C.differential(inc).toarray()) if 0 <= inc < len(C.ranks) and m else [[] for _ in range(m)]

        # cycles: x with out(x) in the relation span of the target
        if C.rank(tgt) and (out and any(any(r) for r in out)):
            big = _hstack_rows(out, R_tgt, m=C.rank(tgt))
            ker = []
            width = len(big[0])
            S = smith_normal_form(big, transforms=True)
            for j in range(S.rank, width):
                ker.append([S.V[i][j] for i in range(m)])
            K = _column_lattice_basis(ker, m)
        else:
            K = [[1 if i == j else 0 for i in range(m)] for j in range(m)]
        self.cycle_basis = K
        r = len(K)
        solver = _LatticeSolver([[K[j][i] for j in range(r)] for i in range(m)], m)
        self._solver = solver

        gens_L = []
        for j in range(len(inc_m[0]) if inc_m and inc_m[0] else 0):
            gens_L.append([inc_m[i][j] for i in range(m)])
        for j in range(len(R_here[0]) if R_here and R_here[0] else 0):
            gens_L.append([R_here[i][j] for i in range(m)])
        gens_L = [v for v in gens_L if any(v)]
        if r and gens_L:
            Ymat = solver.solve_many(np.array(gens_L, dtype=object).T).tolist()
            S = smith_normal_form(Ymat, transforms=True)
            U, Uinv, diag = S.U, S.U_inv, S.diagonal
        else:
            U = Uinv = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
            diag = []
        self._U = U
        keep, orders = [], []
        for i in range(r):
            d = diag[i] if i < len(diag) else 0
            if d != 1:
                keep.append(i)
                orders.append(d)
        self._keep = keep
        self.orders = orders
        self.generators = []
        if keep:
            Kmat = np.array(K, dtype=object).reshape(r, m).T
            cols = np.array(Uinv, dtype=object).reshape(r, r)[:, keep]
            G = _matmul(Kmat, cols)
            self.generators = [[int(v) for v in G[:, j]] for j in range(len(keep))]
        self.invariants = AbelianInvariants(orders)

    def coordinates(self, cycle) -> list[int]:
        y = self._solver.solve([int(v) for v in cycle])
        z = [sum(self._U[i][t] * y[t] for t in range(len(y)) if y[t]) for i in range(len(y))]
        out = []
        for i, d in zip(self._keep, self.orders):
            out.append(z[i] % d if d else z[i])
        return out


@dataclass
class InducedMap:
    """Homomorphism on homology in chosen generators.

    ``matrix[i][j]`` is the ``i``-th target coordinate of the image of the
    ``j``-th source generator, reduced modulo the target orders.
    """

    source: AbelianInvariants
    target: AbelianInvariants
    matrix: list[list[int]]
    target_orders: list[int]
    source_orders: list[int]


def _check_chain_map(f, A, B, n):
    step = 1 if A.cochain else -1
    for k in (n, n - step):
        if not (0 <= k < len(A.ranks)) or not (0 <= k + step < len(A.ranks)):
            continue
        if not (A.rank(k) and B.rank(k)):
            continue
        fk = _sparse(f, k, B.rank(k), A.rank(k))
        fk1 = _sparse(f, k + step, B.rank(k + step), A.rank(k + step))
        diff = B.differential(k) @ fk - fk1 @ A.differential(k)
        if diff.count_nonzero():
            raise NotChainMap(f"chain map does not commute with differentials at degree {k}")


def _sparse(f, k, rows, cols):
    M = f.get(k) if isinstance(f, dict) else f(k)
    if M is None:
        return sp.csr_matrix((rows, cols), dtype=np.int64)
    if sp.issparse(M):
        return M.tocsr().astype(np.int64)
    return sp.csr_matrix(np.asarray(M, dtype=np.int64).reshape(rows, cols))


def _dense(f, k, rows, cols):
    M = f.get(k) if isinstance(f, dict) else f(k)
    if M is None:
        return np.zeros((rows, cols), dtype=object)
    if hasattr(M, "toarray"):
        M = M.toarray()
    return np.asarray(M, dtype=object).reshape(rows, cols)


def induced_map(f, source: IntChainComplex, target: IntChainComplex, n: int) -> InducedMap:
    """Map on degree-``n`` homology induced by the chain map ``f``.

    ``f`` maps a degree ``k`` to a ``target.rank(k) x source.rank(k)`` matrix
    (a dict or a callable).
    """
    _check_chain_map(f, source, target, n)
    Hs = HomologyGroup(source, n)
    Ht = HomologyGroup(target, n)
    fn = _dense(f, n, target.rank(n), source.rank(n))
    cols = []
    for g in Hs.generators:
        img = (fn @ np.asarray(g, dtype=object)).tolist() if len(g) else [0] * target.rank(n)
        cols.append(Ht.coordinates(img))
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(len(Ht.orders))]
    return InducedMap(Hs.invariants, Ht.invariants, mat, list(Ht.orders), list(Hs.orders))


def cokernel(m: InducedMap) -> AbelianInvariants:
    """Cokernel of an induced map, from the stacked presentation ``(matrix | orders)``."""
    t = len(m.target_orders)
    if t == 0:
        return AbelianInvariants()
    extra = [i for i, d in enumerate(m.target_orders) if d]
    P =[list(m.matrix[i]) + [m.target_orders[i] if i == e else 0 for e in extra] for i in range(t)]
    if not P[0]:
        return AbelianInvariants([0] * t)
    return cokernel_invariants(P)
