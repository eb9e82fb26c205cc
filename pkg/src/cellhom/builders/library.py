"""Small named complexes: simplicial surfaces, spheres, tori and a few knot complements."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ..cw import RegularCW, direct_product, from_boundaries, point
from .cubical import PureCubical, annulus, to_regular_cw


def from_simplices(facets) -> RegularCW:
    """Regular CW-complex of the simplicial complex generated by ``facets`` (vertex labels)."""
    faces: set[tuple] = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            faces.update(combinations(f, k))
    by_dim: list[list[tuple]] = []
    for s in sorted(faces, key=lambda s: (len(s), s)):
        while len(by_dim) < len(s):
            by_dim.append([])
        by_dim[len(s) - 1].append(s)
    index = [{s: i for i, s in enumerate(cells)} for cells in by_dim]
    data = [[[] for _ in by_dim[0]]]
    for n in range(1, len(by_dim)):
        data.append([[index[n - 1][s[:i] + s[i + 1:]] for i in range(len(s))] for s in by_dim[n]])
    return from_boundaries(data, one_based=False, properties={"simplices": by_dim})


def circle() -> RegularCW:
    return from_boundaries([[[], []], [[1, 2], [1, 2]]])


def sphere(n: int) -> RegularCW:
    """``S^n`` with two cells in each dimension."""
    if n < 0:
        raise ValueError("dimension must be non-negative")
    data = [[[], []]]
    for _ in range(1, n + 1):
        data.append([[1, 2], [1, 2]])
    return from_boundaries(data)


def ball(n: int) -> RegularCW:
    """``D^n``: the sphere ``S^(n-1)`` with one ``n``-cell attached."""
    if n == 0:
        return point()
    data = [[[], []]] + [[[1, 2], [1, 2]] for _ in range(1, n)] + [[[1, 2]]]
    return from_boundaries(data)


def torus() -> RegularCW:
    return direct_product(circle(), circle())


# 6-vertex triangulation of the real projective plane
_RP2 = [(1, 2, 4), (1, 2, 6), (1, 3, 5), (1, 3, 6), (1, 4, 5),
        (2, 3, 4), (2, 3, 5), (2, 5, 6), (3, 4, 6), (4, 5, 6)]


def projective_plane() -> RegularCW:
    return from_simplices(_RP2)


def klein_bottle() -> RegularCW:
    """A 3x3 grid of squares with the Klein bottle's edge identifications, triangulated."""
    def v(i, j):
        i %= 3
        if j % 3 == 0 and j != 0:
            j = 0
            i = (-i) % 3
        return 3 * i + j % 3
    tris = []
    for i in range(3):
        for j in range(3):
            a, b, c, d = v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1)
            tris += [(a, b, d), (a, c, d)]
    return from_simplices(tris)


def figure_annulus() -> RegularCW:
    """Eight unit squares around a square hole (48 cells)."""
    return to_regular_cw(annulus())


def corpus() -> dict[str, RegularCW]:
    """Test corpus: a mix of manifolds, a non-manifold and knot complements."""
    from .arcs import knot_complement, standard_arc

    out = {
        "point": point(),
        "circle": circle(),
        "sphere2": sphere(2),
        "sphere3": sphere(3),
        "ball3": ball(3),
        "torus": torus(),
        "klein_bottle": klein_bottle(),
        "projective_plane": projective_plane(),
        "annulus": figure_annulus(),
        "torus3": direct_product(circle(), circle(), circle()),
        "wedge_graph": from_boundaries([[[]] * 3, [[1, 2], [1, 2], [2, 3], [2, 3], [1, 3]]]),
        "cube_shell": to_regular_cw(PureCubical(np.pad(np.zeros((1, 1, 1), bool), 1, constant_values=True))),
        "hopf_complement": knot_complement(standard_arc("hopf")),
        "trefoil_complement": knot_complement(standard_arc("trefoil")),
    }
    return out
