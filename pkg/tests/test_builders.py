import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from cellhom.builders import arcs
from cellhom.builders.arcs import MalformedArc
from cellhom.builders.cubical import (EmptyComplex, PureCubical, UnassignedCube, pure_complement,
                                      temperature_extrusion, to_regular_cw)
from cellhom.builders.library import ball, circle, torus
from cellhom.builders.spin import spin
from cellhom.builders.tubular import AssumptionViolated, tubular_complement
from cellhom.covers import identity_map, inclusion
from cellhom.cw import (CellRef, cellular_homology, closure_masks, euler_characteristic, from_boundaries,
                        is_connected, path_components, point)
from cellhom.fundamental_group import pi1_presentation
from conftest import same_homology
from oracles import is_amphichiral_by_bracket, kauffman_polynomial, subdivision_homology


HOPF, UNKNOT, TREFOIL = (arcs.standard_arc(n) for n in ("hopf", "unknot", "trefoil"))


def H(X):
    return [list(h) for h in cellular_homology(X)]


# -- arc presentations ---------------------------------------------------------

@pytest.mark.parametrize("a,h,k", [(HOPF, 4, 2), (UNKNOT, 2, 0), (TREFOIL, 5, 3)])
def test_arc_counts(a, h, k):
    assert (a.h, a.k, arcs.crossing_count(a)) == (h, k, k)


@pytest.mark.parametrize("pairs", [[[1, 1], [2, 2]], [[1, 2], [1, 2], [1, 2]], [[1, 2], [2, 3]],
                                   [[0, 1], [0, 1]], [[1, 2, 3]], []])
def test_malformed_arcs(pairs):
    with pytest.raises(MalformedArc):
        arcs.parse_arc(pairs)


def test_mirror_and_connected_sum():
    t = TREFOIL
    assert arcs.mirror(arcs.mirror(t)) == t
    g = arcs.connected_sum(t, t)
    assert (g.h, g.k) == (10, 7) and g.component_count() == 1
    assert arcs.standard_arc("granny") == g
    assert arcs.standard_arc("reef") == arcs.connected_sum(t, arcs.mirror(t))


def test_bracket_oracle_on_standard_knots():
    assert kauffman_polynomial(UNKNOT) == {0: 1}
    f = kauffman_polynomial(TREFOIL)
    assert f in ({-16: -1, -12: 1, -4: 1}, {16: -1, 12: 1, 4: 1})
    assert kauffman_polynomial(arcs.mirror(TREFOIL)) == {-p: c for p, c in f.items()}
    assert kauffman_polynomial(arcs.connected_sum(TREFOIL, UNKNOT)) == f
    assert is_amphichiral_by_bracket(arcs.standard_arc("reef"))
    assert not is_amphichiral_by_bracket(arcs.standard_arc("granny"))


def test_split_diagrams_rejected():
    with pytest.raises(MalformedArc):
        arcs.knot_complement([[1, 2], [1, 2], [3, 4], [3, 4]])


@pytest.mark.parametrize("name,size", [("unknot", 119), ("hopf", 303), ("trefoil", 395),
                                       ("granny", 807), ("reef", 807)])
def test_complement_sizes(name, size):
    a = arcs.standard_arc(name)
    X = arcs.knot_complement(a)
    assert X.size == size == 3 * (14 * a.h + 16 * a.k + 9) + 2 * a.h + 4
    assert X.dimension == 3


def test_punctured_disk_counts():
    for a in (HOPF, TREFOIL):
        D = arcs.punctured_disk(a).complex
        assert D.cell_counts() == [4 * a.h + 4 * a.k + 2, 8 * a.h + 8 * a.k + 4, 2 * a.h + 4 * a.k + 3]


@st.composite
def arc_presentations(draw):
    h = draw(st.integers(2, 6))
    cols = draw(st.permutations([c for c in range(1, h + 1) for _ in range(2)]))
    pairs = [cols[2 * i:2 * i + 2] for i in range(h)]
    assume(all(p != q for p, q in pairs))
    a = arcs.parse_arc(pairs)
    assume(a.is_connected_diagram())
    return a


@settings(max_examples=12, deadline=None)
@given(arc_presentations())
def test_size_formula_and_first_homology(a):
    X = arcs.knot_complement(a)
    assert X.size == arcs.expected_size(a) == 3 * (14 * a.h + 16 * a.k + 9) + 2 * a.h + 4
    X.validate()
    assert is_connected(X)
    assert list(cellular_homology(X)[1]) == [0] * a.component_count()


def test_link_first_homology():
    assert H(arcs.knot_complement(HOPF))[1] == [0, 0]
    assert H(arcs.knot_complement(arcs.standard_arc("granny")))[1] == [0]
    assert H(arcs.knot_complement(UNKNOT)) == [[0], [0], [0], []]


def test_axis_disk():
    i = arcs.knot_complement_with_axis(HOPF)
    B = i.source
    assert i.is_injective() and i.commutes_with_boundaries()
    assert is_connected(B) and euler_characteristic(B) == 1 and B.dimension == 2


def test_arc_json_round_trip():
    assert arcs.parse_arc(TREFOIL.to_json()) == TREFOIL


# -- cubical -------------------------------------------------------------------

def test_cube_shell():
    X = to_regular_cw(pure_complement(PureCubical(np.ones((1, 1, 1), dtype=bool))))
    assert H(X) == [[0], [], [0], []]


def test_empty_complement():
    with pytest.raises(EmptyComplex):
        pure_complement(PureCubical(np.zeros((2, 2), dtype=bool)))


def test_cubical_trefoil():
    N = arcs.arc_to_cubical(TREFOIL)
    assert H(to_regular_cw(N))[:2] == [[0], [0]]
    X = to_regular_cw(pure_complement(N))
    assert H(X)[1] == [0]
    assert pi1_presentation(X).abelianization() == (0,)
    assert 13291 / 3 < X.size < 13291 * 3


def test_complement_contains_original():
    N = arcs.arc_to_cubical(HOPF)
    again = pure_complement(pure_complement(N)).occupancy
    inner = again[2:-2, 2:-2, 2:-2]
    assert (inner == N.occupancy).all()


def test_cubical_json():
    N = arcs.arc_to_cubical(HOPF)
    assert (PureCubical.from_json(N.to_json()).occupancy == N.occupancy).all()


def test_temperature_extrusion():
    Y = arcs.arc_to_cubical(UNKNOT)
    flat = temperature_extrusion(Y, lambda c: 0)
    assert flat.dimension == 4 and same_homology(H(to_regular_cw(flat)), H(to_regular_cw(Y)))
    tube = PureCubical(np.ones((1, 1, 5), dtype=bool))
    ramp = temperature_extrusion(tube, lambda c: c[2])
    R = to_regular_cw(ramp)
    assert euler_characteristic(R) == 1 and H(R)[0] == [0] and all(h == [] for h in H(R)[1:])
    two = np.zeros((3, 1, 5), dtype=bool)
    two[0] = two[2] = True
    both = temperature_extrusion(PureCubical(two), lambda c: c[2] if c[0] == 2 else 0)
    assert H(to_regular_cw(both))[0] == [0, 0]
    with pytest.raises(UnassignedCube):
        temperature_extrusion(tube, {})


def test_multi_temperature_cube():
    tube = PureCubical(np.ones((1, 1, 3), dtype=bool))
    N = temperature_extrusion(tube, {(0, 0, 0): 0, (0, 0, 1): (0, 1, 2), (0, 0, 2): 2})
    assert N.cube_count() == 5


# -- spinning ------------------------------------------------------------------

def _interval():
    return from_boundaries([[[], []], [[1, 2]]])


def test_spin_whole_complex_is_product():
    X = torus()
    S = spin(identity_map(X))
    assert S.size == X.size * 5 and same_homology(H(S), H(X))


def test_spin_point_about_nothing():
    S = spin(inclusion(point(), []))
    assert H(S) == [[0], [0]] and S.size == 4


@pytest.mark.parametrize("cells,expected", [
    ([], [[0], [0], []]),                                   # annulus
    ([CellRef(0, 0)], [[0], [], []]),                       # disk
    ([CellRef(0, 0), CellRef(0, 1)], [[0], [], [0]]),      # 2-sphere
])
def test_spin_interval(cells, expected):
    S = spin(inclusion(_interval(), cells))
    assert same_homology(H(S), expected)
    assert same_homology(H(S), subdivision_homology(S))


def test_spin_square_about_boundary_is_a_sphere():
    X = ball(2)
    S = spin(inclusion(X, closure_masks(X, [CellRef(1, 0), CellRef(1, 1)])))
    assert same_homology(H(S), [[0], [], [], [0]])


def test_spun_unknot():
    S = spin(arcs.knot_complement_with_axis(UNKNOT))
    # complement of an unknotted torus: Alexander duality gives H_1 = Z, H_2 = Z^2
    assert H(S)[:3] == [[0], [0], [0, 0]]


def test_spun_hopf():
    S = spin(arcs.knot_complement_with_axis(HOPF))
    assert S.size == 1217
    assert pi1_presentation(S).abelianization() == (0, 0)


def test_spin_rejects_non_inclusions():
    from cellhom.covers import CWMap, NotSubcomplex
    X = circle()
    fold = CWMap(X, X, [np.zeros(2, dtype=np.int64), np.zeros(2, dtype=np.int64)])
    with pytest.raises(NotSubcomplex):
        spin(fold)


# -- tubular complements -------------------------------------------------------

def _grid(nx, ny):
    X = to_regular_cw(PureCubical(np.ones((nx, ny), dtype=bool)))
    coords = X.properties["doubled_coordinates"]
    where = {tuple(int(v) for v in c): (n, k) for n, cs in enumerate(coords) for k, c in enumerate(cs)}
    return X, where


def test_excise_interior_vertex():
    X, at = _grid(2, 2)
    W = tubular_complement(X, [at[(2, 2)]])
    assert euler_characteristic(W) == 0 and H(W) == [[0], [0], []]
    W.validate()


def test_excise_boundary_vertex_leaves_a_disk():
    X, at = _grid(1, 1)
    W = tubular_complement(X, [at[(0, 0)]])
    assert euler_characteristic(W) == 1 and H(W) == [[0], [], []]


def test_excise_interior_arc_by_hand_count():
    # 4 x 2 grid, Y = the two middle edges (x from 1 to 3 on the line y = 1)
    X, at = _grid(4, 2)
    Y = [at[(2, 2)], at[(3, 2)], at[(4, 2)], at[(5, 2)], at[(6, 2)]]
    W = tubular_complement(X, Y)
    assert W.cell_counts() == [20, 28, 8]
    assert W.properties["internal_counts"] == [12, 20, 8]
    assert H(W) == [[0], [0], []]


def test_excise_nothing():
    X = torus()
    assert tubular_complement(X, []) == X


@pytest.mark.parametrize("name", ["torus", "sphere2", "klein_bottle"])
def test_excise_vertex_from_surface(complexes, name):
    X = complexes[name]
    W = tubular_complement(X, [(0, 0)])
    assert euler_characteristic(W) == euler_characteristic(X) - 1
    assert same_homology(H(W), subdivision_homology(W))


def test_assumption_violated():
    X = ball(2)
    with pytest.raises(AssumptionViolated):
        tubular_complement(X, closure_masks(X, [CellRef(1, 0), CellRef(1, 1)]))
