import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from cellhom.snf import (AbelianInvariants, cokernel_invariants, elementary_divisors, is_divisibility_chain,
                         kernel_basis, smith_normal_form, solve_integer)
from oracles import invariants


def matrices(max_side=6, bound=9):
    return st.integers(1, max_side).flatmap(
        lambda m: st.integers(1, max_side).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


def test_abelian_invariants_normalise():
    assert AbelianInvariants([2, 0, 4]) == (0, 2, 4)
    assert AbelianInvariants([2, 3]) == (6,)
    assert AbelianInvariants([1, 1, 0]) == (0,)
    assert AbelianInvariants([]).human() == "0"
    assert AbelianInvariants([0, 0, 2]).human() == "Z^2 + Z/2"
    assert AbelianInvariants([0, 2]).gap() == "[ 0, 2 ]"


def test_known_forms():
    assert smith_normal_form([[2, 4], [6, 8]]).diagonal == [2, 4]
    assert smith_normal_form([[0, 0], [0, 0]]).diagonal == []
    assert elementary_divisors([[2, 0], [0, 3]]) == [1, 6]
    assert cokernel_invariants([[2, 0], [0, 3], [0, 0]]) == (0, 6)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_diagonal_matches_sympy(M):
    assert smith_normal_form(M).diagonal == invariants(M)


@settings(max_examples=150, deadline=None)
@given(matrices(bound=3))
def test_sparse_route_agrees_with_dense(M):
    assert elementary_divisors(sp.csr_matrix(np.array(M))) == smith_normal_form(M).diagonal


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_transforms_recompose(M):
    S = smith_normal_form(M, transforms=True)
    U, A, V = np.array(S.U, dtype=object), np.array(M, dtype=object), np.array(S.V, dtype=object)
    assert (U.dot(A).dot(V) == np.array(S.diagonal_matrix(), dtype=object)).all()
    assert (U.dot(np.array(S.U_inv, dtype=object)) == np.eye(len(M), dtype=int)).all()
    assert is_divisibility_chain(S.diagonal)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_and_solve(M):
    A = np.array(M, dtype=object)
    for v in kernel_basis(M):
        assert not A.dot(np.array(v, dtype=object)).any()
    x = [1] * len(M[0])
    b = list(A.dot(np.array(x, dtype=object)))
    y = solve_integer(M, b)
    assert y is not None and list(A.dot(np.array(y, dtype=object))) == b


def test_unsolvable_system():
    assert solve_integer([[2]], [1]) is None


@pytest.mark.parametrize("d", [[1, 2, 4], [3, 6, 0]])
def test_divisibility_chain_flags(d):
    assert is_divisibility_chain(d) == (0 not in d)
