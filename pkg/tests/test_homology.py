import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from cellhom.builders.library import circle, torus
from cellhom.chains import IntChainComplex, NotAComplex
from cellhom.covers import covering_cw, homology_of_map, identity_map
from cellhom.cw import cellular_homology, point, signed_chain_complex
from cellhom.fundamental_group import pi1_presentation
from cellhom.groups import todd_coxeter
from cellhom.homology import (HomologyGroup, NotChainMap, all_homology, cohomology, cokernel, homology,
                              induced_map)
from cellhom.snf import matrix_rank
from oracles import invariants


def test_point():
    assert [list(h) for h in cellular_homology(point())] == [[0]]


def test_not_a_complex():
    C = IntChainComplex([1, 1, 1], {1: [[1]], 2: [[1]]})
    with pytest.raises(NotAComplex):
        C.check()


def test_cohomology_needs_cochains():
    with pytest.raises(ValueError):
        cohomology(signed_chain_complex(circle()), 0)


def test_rank_nullity(complexes):
    for name, X in complexes.items():
        C = signed_chain_complex(X)
        for n in range(1, X.dimension + 1):
            d = C.differential(n)
            kernel = C.rank(n) - matrix_rank(d)
            assert kernel + matrix_rank(d) == C.rank(n)
            assert homology(C, n).free_rank == kernel - (matrix_rank(C.differential(n + 1))
                                                        if n < X.dimension else 0), name


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=2, max_size=4))
def test_two_term_complex_against_sympy(rows):
    # Z^3 -> Z^m: H_0 = coker, H_1 = ker
    M = np.array(rows)
    C = IntChainComplex([M.shape[0], 3], {1: sp.csr_matrix(M)})
    f = invariants(M.tolist())
    assert list(homology(C, 0)) == sorted([0] * (M.shape[0] - len(f)) + [d for d in f if d > 1],
                                          key=lambda d: (d != 0, d))
    assert homology(C, 1).free_rank == 3 - len(f)


def test_homology_generators_are_cycles(complexes):
    for name in ("torus", "klein_bottle", "projective_plane"):
        C = signed_chain_complex(complexes[name])
        H = HomologyGroup(C, 1)
        for g in H.generators:
            assert not (C.differential(1) @ np.array(g, dtype=np.int64)).any()
        for i, g in enumerate(H.generators):
            coords = H.coordinates(g)
            assert coords == [1 if j == i else 0 for j in range(len(H.generators))]


def test_identity_induced_map():
    m = homology_of_map(identity_map(torus()), 1)
    assert m.matrix == [[1, 0], [0, 1]] and cokernel(m) == ()


def test_doubling_map_on_circle():
    X = circle()
    P = pi1_presentation(X)
    p = covering_cw(X, todd_coxeter(P, [(1, 1)]))
    assert p.source.cell_counts() == [4, 4]
    m = homology_of_map(p, 1)
    assert cokernel(m) == (2,)


def test_not_a_chain_map():
    C = signed_chain_complex(circle())
    bad = {0: np.eye(2, dtype=int), 1: np.zeros((2, 2), dtype=int)}
    with pytest.raises(NotChainMap):
        induced_map(bad, C, C, 1)


def test_all_homology_lengths(complexes):
    for X in complexes.values():
        assert len(all_homology(signed_chain_complex(X))) == X.dimension + 1
