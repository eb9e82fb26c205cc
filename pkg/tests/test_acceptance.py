"""End-to-end acceptance checks, one or more tests per numbered criterion.

The terminal summary prints a PASS/FAIL line for each criterion.
"""

import json
import os
import time
from functools import lru_cache

import numpy as np
import pytest

from cellhom.builders import arcs, cubical
from cellhom.builders.library import _RP2, figure_annulus, projective_plane
from cellhom.builders.spin import spin
from cellhom.coefficients import perm_module, tensor_with_module
from cellhom.covers import covering_cw
from cellhom.cw import cellular_homology, direct_product, euler_characteristic
from cellhom.equivariant import universal_cover_chain_complex
from cellhom.fundamental_group import pi1_presentation, simplify_presentation
from cellhom.groups import low_index_subgroups, todd_coxeter
from cellhom.homology import all_homology
from cellhom.invariants import classify, invariant_I, invariant_J
from cellhom.morse import build_maximal_dvf, critical_cells, is_admissible, morse_chain_complex
from cellhom.simplify import simplify
from cellhom.snf import is_divisibility_chain, smith_normal_form
from conftest import same_homology
from oracles import is_amphichiral_by_bracket, subdivision_homology, twisted_cohomology_rp2


def H(X):
    return [list(h) for h in cellular_homology(X)]


def criterion(n, text):
    return pytest.mark.criterion(n, text)


# 1 -----------------------------------------------------------------------------

@criterion(1, "four-torus: 48 -> 12 cells, index-125 cover homology Z,Z^4,Z^6,Z^4,Z, cover size 2592000")
def test_four_torus_cover():
    start = time.time()
    S = figure_annulus()
    assert S.size == 48
    S1 = simplify(S)
    assert S1.size <= 12
    Y = direct_product(S1, S1, S1, S1)
    C = universal_cover_chain_complex(Y)
    T = todd_coxeter(C.group, [(1,) * 5, (2,) * 5, (3,) * 5, (4,)])
    assert T.index == 125
    D = tensor_with_module(C, perm_module(C.group, T))
    assert [list(h) for h in all_homology(D)][:5] == [[0], [0] * 4, [0] * 6, [0] * 4, [0]]
    assert covering_cw(Y, T).source.size == 2592000
    assert time.time() - start < 600


# 2 -----------------------------------------------------------------------------

@criterion(2, "Hopf complement has 303 cells; size formula on random arcs")
def test_hopf_complement_size():
    assert arcs.knot_complement(arcs.HOPF).size == 303


def _random_connected_arcs(count, seed=7):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        h = int(rng.integers(2, 8))
        cols = rng.permutation(np.repeat(np.arange(1, h + 1), 2)).tolist()
        pairs = [cols[2 * i:2 * i + 2] for i in range(h)]
        if any(p == q for p, q in pairs):
            continue
        a = arcs.parse_arc(pairs)
        if a.is_connected_diagram():
            out.append(a)
    return out


@criterion(2, "Hopf complement has 303 cells; size formula on random arcs")
def test_size_formula_on_random_arcs():
    for a in _random_connected_arcs(12):
        assert arcs.knot_complement(a).size == 3 * (14 * a.h + 16 * a.k + 9) + 2 * a.h + 4


# 3 -----------------------------------------------------------------------------

@criterion(3, "spun Hopf: all 6 index-5 covers have H_2 = Z^12")
def test_spun_hopf_invariant():
    start = time.time()
    X = spin(arcs.knot_complement_with_axis(arcs.HOPF))
    R = invariant_I(X, 5)
    assert len(R.rows) == 6
    assert [list(v) for v in R.values] == [[0] * 12]
    assert time.time() - start < 300


# 4 -----------------------------------------------------------------------------

TARGET = [0, 2, 2, 8]


@lru_cache(maxsize=None)
def _j6(name):
    return invariant_J(arcs.knot_complement(arcs.standard_arc(name)), 6)


@pytest.mark.slow
@criterion(4, "Z+Z2+Z2+Z8 in J_6(reef) and not in J_6(granny)")
@pytest.mark.xfail(strict=True, reason="computed J_6 contains the group for the granny knot (t#t), not the reef knot")
def test_granny_reef_as_stated():
    assert TARGET in _j6("reef")
    assert TARGET not in _j6("granny")


@pytest.mark.slow
def test_j6_separates_granny_and_reef():
    granny, reef = _j6("granny"), _j6("reef")
    assert granny.values != reef.values
    assert TARGET in granny and TARGET not in reef
    # the diagrams really are the square and granny knots
    assert is_amphichiral_by_bracket(arcs.standard_arc("reef"))
    assert not is_amphichiral_by_bracket(arcs.standard_arc("granny"))


# 5 -----------------------------------------------------------------------------

COVER_CASES = [("torus", 5), ("klein_bottle", 4), ("projective_plane", 2), ("torus3", 3),
               ("hopf_complement", 3), ("trefoil_complement", 6), ("annulus", 8), ("wedge_graph", 3)]


@criterion(5, "materialised covers and tensor complexes agree on >= 20 (complex, subgroup) pairs")
def test_cover_pipelines_agree(complexes):
    pairs = 0
    for name, c in COVER_CASES:
        X = complexes[name]
        C = universal_cover_chain_complex(X)
        for T in low_index_subgroups(simplify_presentation(C.group), c):
            assert T.index <= 8
            via_cover = H(covering_cw(X, T).source)
            via_tensor = [list(h) for h in all_homology(tensor_with_module(C, perm_module(C.group, T)))]
            assert same_homology(via_cover, via_tensor), (name, T.index)
            pairs += 1
    assert pairs >= 20


# 6 -----------------------------------------------------------------------------

@criterion(6, "Morse complex homology, critical-cell Euler sum and admissibility on the corpus")
def test_morse_corpus(complexes):
    for name, X in complexes.items():
        V = build_maximal_dvf(X)
        assert is_admissible(X, V), name
        counts = critical_cells(X, V).counts()
        assert sum((-1) ** n * c for n, c in enumerate(counts)) == euler_characteristic(X), name
        M = [list(h) for h in all_homology(morse_chain_complex(X, V))]
        assert same_homology(M, H(X)), name


# 7 -----------------------------------------------------------------------------

@criterion(7, "simplify keeps Euler characteristic and homology; Hopf complement 303 -> <= 150")
def test_simplify_corpus(complexes):
    for name, X in complexes.items():
        Y = simplify(X)
        assert euler_characteristic(Y) == euler_characteristic(X), name
        assert same_homology(H(Y), H(X)), name


@criterion(7, "simplify keeps Euler characteristic and homology; Hopf complement 303 -> <= 150")
def test_simplify_hopf_bound():
    X = arcs.knot_complement(arcs.HOPF)
    Y = simplify(X)
    assert X.size == 303 and Y.size <= 150
    assert same_homology(H(Y), H(X))


# 8 -----------------------------------------------------------------------------

SHAPE = [[0], [0, 0], [0] * 4, [0, 0]]


def _has_hopf_satoh_shape(X) -> bool:
    h = H(X)
    return same_homology(h[:4], SHAPE) and all(not g for g in h[4:]) \
        and list(pi1_presentation(X).abelianization()) == [0, 0]


@criterion(8, "Hopf-Satoh homology shape H_1=Z^2, H_2=Z^4, H_3=Z^2 (full welded-tube values need user data)")
def test_shape_on_spun_hopf():
    # the spun Hopf complement has the same integral homology and pi_1 as the welded tube complement
    assert _has_hopf_satoh_shape(spin(arcs.knot_complement_with_axis(arcs.HOPF)))


@pytest.mark.slow
@criterion(8, "Hopf-Satoh homology shape H_1=Z^2, H_2=Z^4, H_3=Z^2 (full welded-tube values need user data)")
@pytest.mark.skipif("CELLHOM_TUBE_DATA" not in os.environ,
                    reason="no temperature data; set CELLHOM_TUBE_DATA to a JSON file to run")
def test_shape_on_user_tube():
    """``{"cubical": <PureCubical JSON>, "temperatures": [[x, y, z, t], ...]}`` with 0-based cube indices."""
    data = json.loads(open(os.environ["CELLHOM_TUBE_DATA"]).read())
    Y = cubical.PureCubical.from_json(data["cubical"])
    temps = {tuple(c[:3]): c[3] for c in data["temperatures"]}
    N = cubical.temperature_extrusion(Y, temps)
    X = cubical.to_regular_cw(cubical.pure_complement(N))
    assert _has_hopf_satoh_shape(X)


# 9 -----------------------------------------------------------------------------

@criterion(9, "classify: RP^2 self-maps give Z; trivial phi gives ordinary cohomology on 5 cases")
def test_classify_projective_plane():
    A = classify(projective_plane(), projective_plane(), [(1,)], 2)
    assert list(A) == twisted_cohomology_rp2(_RP2) == [0]


@criterion(9, "classify: RP^2 self-maps give Z; trivial phi gives ordinary cohomology on 5 cases")
def test_classify_command_line(capsys):
    from cellhom.cli import main
    argv = ["--json", "classify", "--source", "named:projective-plane", "--target", "named:projective-plane",
            "--phi", "[[1]]", "--degree", "2"]
    assert main(argv) == 0
    assert json.loads(capsys.readouterr().out) == {"classes": [0]}


@criterion(9, "classify: RP^2 self-maps give Z; trivial phi gives ordinary cohomology on 5 cases")
@pytest.mark.parametrize("name", ["circle", "sphere2", "torus", "klein_bottle", "projective_plane"])
def test_classify_trivial_phi(complexes, name):
    W = complexes[name]
    A = classify(W, projective_plane(), [()] * pi1_presentation(W).generator_count, 2)
    h = subdivision_homology(W)
    free = h[2].count(0) if len(h) > 2 else 0
    assert sorted(A) == sorted([0] * free + [d for d in h[1] if d > 1])


# 10 ----------------------------------------------------------------------------

def _det(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


@criterion(10, "SNF: divisibility, U M V = D and |det| on 1000 random matrices")
def test_snf_random_suite():
    rng = np.random.default_rng(2024)
    for trial in range(1000):
        m, n = (int(x) for x in rng.integers(1, 21, size=2))
        if trial % 4 == 0:
            n = m
        M = rng.integers(-50, 51, size=(m, n))
        if trial % 10 == 0 and m > 1:
            M[-1] = M[0] * 3          # force some rank deficiency
        S = smith_normal_form(M.tolist(), transforms=True)
        assert is_divisibility_chain(S.diagonal)
        U, V = np.array(S.U, dtype=object), np.array(S.V, dtype=object)
        assert (U.dot(M.astype(object)).dot(V) == np.array(S.diagonal_matrix(), dtype=object)).all()
        assert abs(_det(S.U)) == 1 and abs(_det(S.V)) == 1
        if m == n:
            d = _det(M.tolist())
            expected = int(np.prod(np.array(S.diagonal, dtype=object))) if S.rank == n else 0
            assert abs(d) == expected
