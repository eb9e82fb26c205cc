"""Chain and cochain complexes of finitely generated abelian groups."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class NotAComplex(ValueError):
    pass


def _csr(M, shape):
    if M is None:
        return sp.csr_matrix(shape, dtype=np.int64)
    if sp.issparse(M):
        M = M.tocsr()
    else:
        M = sp.csr_matrix(np.asarray(M, dtype=np.int64).reshape(shape))
    if M.shape != tuple(shape):
        raise ValueError(f"differential has shape {M.shape}, expected {shape}")
    return M


@dataclass
class IntChainComplex:
    """Free abelian groups ``Z^ranks[k]`` with integer differentials.

    For a chain complex ``maps[k]`` is ``C_k -> C_{k-1}`` (shape
    ``ranks[k-1] x ranks[k]``); for a cochain complex (``cochain=True``) it is
    ``C^k -> C^{k+1}``.  ``relations[k]``, when present, is a
    ``ranks[k] x r`` matrix whose columns are relations imposed on degree
    ``k`` (used for coefficient modules with torsion).
    """

    ranks: list[int]
    maps: dict[int, sp.csr_matrix] = field(default_factory=dict)
    cochain: bool = False
    relations: dict[int, np.ndarray] = field(default_factory=dict)
    properties: dict = field(default_factory=dict)

    def __post_init__(self):
        self.ranks = [int(r) for r in self.ranks]
        fixed = {}
        for k, M in self.maps.items():
            tgt = k + 1 if self.cochain else k - 1
            fixed[k] = _csr(M, (self.rank(tgt), self.rank(k)))
        self.maps = fixed
        self.properties.setdefault("type", "cochain" if self.cochain else "chain")
        self._divisors = {}

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def rank(self, k: int) -> int:
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    dimension = rank

    def differential(self, k: int) -> sp.csr_matrix:
        """Outgoing differential of degree ``k`` (zero when absent)."""
        if k in self.maps:
            return self.maps[k]
        tgt = k + 1 if self.cochain else k - 1
        return sp.csr_matrix((self.rank(tgt), self.rank(k)), dtype=np.int64)

    def boundary(self, k: int, j: int) -> list[int]:
        """Image of the ``j``-th generator of degree ``k`` as a dense vector."""
        return self.differential(k)[:, j].toarray().ravel().tolist()

    def relation_matrix(self, k: int) -> np.ndarray:
        R = self.relations.get(k)
        if R is None:
            return np.zeros((self.rank(k), 0), dtype=object)
        return np.asarray(R, dtype=object).reshape(self.rank(k), -1)

    def has_relations(self) -> bool:
        return any(np.asarray(R).size for R in self.relations.values())

    def check(self) -> None:
        """Raise :class:`NotAComplex` unless consecutive differentials compose to zero."""
        step = 1 if self.cochain else -1
        for k in range(len(self.ranks)):
            a = self.differential(k)
            b = self.differential(k + step)
            prod = b @ a
            if prod.nnz and np.any(prod.data):
                if self.has_relations() and _in_relation_span(self, prod, k + 2 * step):
                    continue
                raise NotAComplex(f"composite of differentials at degree {k} is nonzero")


def _in_relation_span(C, prod, degree) -> bool:
    from .snf import solve_integer

    R = C.relation_matrix(degree)
    if R.shape[1] == 0:
        return False
    dense = prod.toarray()
    for j in range(dense.shape[1]):
        if solve_integer(R.tolist(), dense[:, j].tolist()) is None:
            return False
    return True
