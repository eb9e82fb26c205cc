"""Group-ring modules and the coefficient functors on free chain complexes.

A module is an abelian group ``Z^r / (relation columns)`` on which each
group generator acts by an integer matrix on row vectors:
``a . x = a @ action[x]``.  A left action ``L`` converts to this convention
via ``M_x = (L_{x^-1})^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .chains import IntChainComplex
from .equivariant import EquivariantChainComplex
from .fundamental_group import FpPresentation
from .groups import CosetTable, word_action
from .snf import AbelianInvariants, cokernel_invariants, smith_normal_form, solve_integer


class PresentationMismatch(ValueError):
    pass


class NotAHomomorphism(ValueError):
    pass


class NotAModule(ValueError):
    pass


@dataclass
class ZGModule:
    """Finitely generated module over the group ring of ``group``.

    ``relations`` is an ``r x k`` integer matrix whose columns are relations
    among the ``r`` generators (``k = 0`` for a free abelian group).
    ``inverse_action`` is derived when not supplied.
    """

    group: FpPresentation
    rank: int
    action: list[np.ndarray]
    relations: np.ndarray | None = None
    inverse_action: list[np.ndarray] | None = None
    permutations: list[list[int]] | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        r = self.rank
        self.action = [np.asarray(M, dtype=object).reshape(r, r) for M in self.action]
        if len(self.action) != self.group.generator_count:
            raise NotAModule("one action matrix per generator is required")
        if self.relations is None:
            self.relations = np.zeros((r, 0), dtype=object)
        R = np.asarray(self.relations, dtype=object)
        self.relations = R.reshape(r, -1) if r else np.zeros((0, R.shape[-1] if R.ndim == 2 else 0), dtype=object)
        if self.inverse_action is None:
            self.inverse_action = [self._invert(M) for M in self.action]
        else:
            self.inverse_action = [np.asarray(M, dtype=object).reshape(r, r) for M in self.inverse_action]
        for r_ in self.group.relators:
            if not self.acts_trivially(r_):
                raise NotAModule(f"relator {r_} does not act as the identity")

    @property
    def abelian_invariants(self) -> AbelianInvariants:
        if self.relations.shape[1] == 0:
            return AbelianInvariants([0] * self.rank)
        return cokernel_invariants(self.relations.tolist(), self.rank)

    def _congruent(self, A, B) -> bool:
        """Do ``A`` and ``B`` agree as endomorphisms of the quotient group?"""
        D = np.asarray(A, dtype=object) - np.asarray(B, dtype=object)
        if not D.any():
            return True
        if self.relations.shape[1] == 0:
            return False
        # each row of D (image of a generator) must lie in the relation lattice
        R = self.relations.tolist()
        return all(solve_integer(R, row.tolist()) is not None for row in D)

    def _invert(self, M):
        r = self.rank
        I = np.identity(r, dtype=object)
        if r == 0:
            return M
        S = smith_normal_form(M.tolist(), transforms=True)
        if S.rank == r and all(d == 1 for d in S.diagonal):
            return np.asarray(S.V, dtype=object) @ np.asarray(S.U, dtype=object)
        # on a finite quotient some power of M is the identity
        P = I
        for _ in range(10000):
            Q = P @ M
            if self._congruent(Q, I):
                return P
            P = Q
        raise NotAModule("action matrix is not invertible on the module")

    def matrix(self, w) -> np.ndarray:
        """Matrix of the word ``w`` acting on row vectors."""
        w = tuple(w)
        got = self._cache.get(w)
        if got is not None:
            return got
        if not w:
            M = np.identity(self.rank, dtype=object)
        elif len(w) == 1:
            x = w[0]
            M = self.action[x - 1] if x > 0 else self.inverse_action[-x - 1]
        else:
            h = len(w) // 2
            M = self.matrix(w[:h]) @ self.matrix(w[h:])
        self._cache[w] = M
        return M

    def acts_trivially(self, w) -> bool:
        return self._congruent(self.matrix(w), np.identity(self.rank, dtype=object))

    def permutation(self, w) -> list[int] | None:
        if self.permutations is None:
            return None
        key = ("perm", tuple(w))
        got = self._cache.get(key)
        if got is None:
            n = self.rank
            got = list(range(n))
            for x in w:
                p = self.permutations[abs(x) - 1]
                if x > 0:
                    got = [p[c] for c in got]
                else:
                    inv = [0] * n
                    for i, j in enumerate(p):
                        inv[j] = i
                    got = [inv[c] for c in got]
            self._cache[key] = got
        return got


def trivial_module(P: FpPresentation, rank: int = 1) -> ZGModule:
    I = np.identity(rank, dtype=object)
    return ZGModule(P, rank, [I] * P.generator_count,
                    permutations=[list(range(rank))] * P.generator_count)


def perm_module(P: FpPresentation, T: CosetTable) -> ZGModule:
    """Permutation module on the cosets: ``e_c . x = e_(c x)``."""
    n = T.index
    perms = T.action
    mats = []
    for p in perms:
        M = np.zeros((n, n), dtype=object)
        for c, d in enumerate(p):
            M[c, d] = 1
        mats.append(M)
    inv = [M.T.copy() for M in mats]
    return ZGModule(P, n, mats, inverse_action=inv, permutations=perms)


def sign_module(P: FpPresentation, signs) -> ZGModule:
    """Rank-one module where generator ``i`` acts by ``signs[i]`` (each +1 or -1)."""
    mats = [np.array([[s]], dtype=object) for s in signs]
    return ZGModule(P, 1, mats, inverse_action=mats)


def module_from_left_action(P: FpPresentation, rank: int, left, relations=None) -> ZGModule:
    """Module given by left-action matrices ``L_x`` (``x . a = L_x a`` on columns)."""
    left = [np.asarray(L, dtype=object).reshape(rank, rank) for L in left]
    tmp = ZGModule(P.__class__(P.generator_count, []), rank, left, relations)
    mats = [tmp.inverse_action[i].T.copy() for i in range(len(left))]
    inv = [L.T.copy() for L in left]
    return ZGModule(P, rank, mats, relations, inverse_action=inv)


def module_via_homomorphism(phi, W: FpPresentation, A: ZGModule) -> ZGModule:
    """Pull ``A`` back along ``phi``: generator ``i`` of ``W`` acts as the word ``phi[i-1]``."""
    if len(phi) != W.generator_count:
        raise NotAHomomorphism("need one image word per generator")
    mats = [A.matrix(w) for w in phi]
    inv = [A.matrix(tuple(-x for x in reversed(w))) for w in phi]
    perms = [A.permutation(w) for w in phi] if A.permutations is not None else None
    try:
        return ZGModule(W, A.rank, mats, A.relations, inverse_action=inv, permutations=perms)
    except NotAModule as exc:
        raise NotAHomomorphism(str(exc)) from None


def _check_group(C: EquivariantChainComplex, A: ZGModule):
    if C.group.generator_count != A.group.generator_count or C.group.relators != A.group.relators:
        raise PresentationMismatch("module and complex use different presentations")


def _block_matrix(C, A, n, block):
    """Assemble the degree-``n`` matrix from per-term ``rank x rank`` blocks."""
    r = A.rank
    rows, cols, vals = [], [], []
    for k, terms in enumerate(C.terms[n]):
        for (f, w), c in terms.items():
            B = block(C.elts[w])
            if isinstance(B, list):                       # permutation: row index per column
                for i, j in enumerate(B):
                    rows.append(f * r + j)
                    cols.append(k * r + i)
                    vals.append(c)
            else:
                nz = np.nonzero(B)
                for i, j in zip(*nz):
                    rows.append(f * r + int(i))
                    cols.append(k * r + int(j))
                    vals.append(c * int(B[i, j]))
    return sp.csr_matrix((np.asarray(vals, dtype=np.int64), (rows, cols)),
                         shape=(C.dimension(n - 1) * r, C.dimension(n) * r))


def _relations(C, A, degrees):
    R = A.relations
    if R.shape[1] == 0:
        return {}
    out = {}
    for n in degrees:
        k = C.dimension(n)
        big = np.zeros((k * A.rank, k * R.shape[1]), dtype=object)
        for i in range(k):
            big[i * A.rank:(i + 1) * A.rank, i * R.shape[1]:(i + 1) * R.shape[1]] = R
        out[n] = big
    return out


def tensor_with_module(C: EquivariantChainComplex, A: ZGModule) -> IntChainComplex:
    """``C (x)_ZG A`` as an integer chain complex of rank ``rank_n(C) * rank(A)``.

    The term ``eps g ~f`` in the boundary of ``~e`` contributes the block
    ``eps M_g^T`` from the coordinates of ``e`` to those of ``f``.
    """
    _check_group(C, A)

    def block(w):
        if A.permutations is not None:
            return A.permutation(w)
        return A.matrix(w).T

    maps = {n: _block_matrix(C, A, n, block) for n in range(1, C.length + 1)}
    ranks = [C.dimension(n) * A.rank for n in range(C.length + 1)]
    return IntChainComplex(ranks, maps, relations=_relations(C, A, range(C.length + 1)))


def hom_with_module(C: EquivariantChainComplex, A: ZGModule) -> IntChainComplex:
    """``Hom_ZG(C, A)`` as an integer cochain complex in ascending degree.

    A cochain is a vector in ``A`` per free generator; the coboundary block
    from ``f`` to ``e`` for the term ``eps g ~f`` is ``eps (M_(g^-1))^T``
    (for a permutation module that is the permutation matrix of ``g``).
    """
    _check_group(C, A)

    def block(w):
        if A.permutations is not None:
            return A.permutation(w)
        return A.matrix(tuple(-x for x in reversed(w)))

    maps = {}
    for n in range(1, C.length + 1):
        D = _block_matrix(C, A, n, block)
        maps[n - 1] = D.T.tocsr()
    ranks = [C.dimension(n) * A.rank for n in range(C.length + 1)]
    return IntChainComplex(ranks, maps, cochain=True, relations=_relations(C, A, range(C.length + 1)))
