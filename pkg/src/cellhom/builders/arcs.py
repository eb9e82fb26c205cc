"""Link complements from arc presentations.

An arc presentation lists, for each horizontal line of a grid diagram
(bottom line first), the two columns it joins.  Every column occurs twice,
and its vertical segment joins the two lines that use it, passing over
every horizontal line it meets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..cw import RegularCW, direct_product, from_boundaries, product_index, CellRef
from ..covers import CWMap, inclusion
from ..cw import closure_masks
from .cubical import PureCubical


class MalformedArc(ValueError):
    pass


@dataclass(frozen=True)
class ArcPresentation:
    arcs: tuple[tuple[int, int], ...]

    @property
    def h(self) -> int:
        return len(self.arcs)

    @cached_property
    def columns(self) -> dict[int, tuple[int, int]]:
        """Column -> the two (1-based) rows using it, lower first."""
        rows: dict[int, list[int]] = {}
        for i, (a, b) in enumerate(self.arcs, start=1):
            rows.setdefault(a, []).append(i)
            rows.setdefault(b, []).append(i)
        return {c: (min(r), max(r)) for c, r in rows.items()}

    @cached_property
    def crossings(self) -> list[tuple[int, int]]:
        """(row, column) pairs where a vertical segment passes over a horizontal one."""
        out = []
        for i, (a, b) in enumerate(self.arcs, start=1):
            lo, hi = min(a, b), max(a, b)
            for c in range(lo + 1, hi):
                r1, r2 = self.columns[c]
                if r1 < i < r2:
                    out.append((i, c))
        return out

    @property
    def k(self) -> int:
        return len(self.crossings)

    def component_count(self) -> int:
        """Number of link components."""
        parent = list(range(self.h + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for r1, r2 in self.columns.values():
            parent[find(r1)] = find(r2)
        return len({find(i) for i in range(1, self.h + 1)})

    def is_connected_diagram(self) -> bool:
        """Whether the union of all segments in the plane is connected."""
        parent = list(range(self.h + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for r1, r2 in self.columns.values():
            parent[find(r1)] = find(r2)
        for i, c in self.crossings:
            parent[find(i)] = find(self.columns[c][0])
        return len({find(i) for i in range(1, self.h + 1)}) == 1

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.arcs]


def parse_arc(pairs) -> ArcPresentation:
    try:
        arcs = tuple((int(a), int(b)) for a, b in pairs)
    except (TypeError, ValueError):
        raise MalformedArc("an arc presentation is a list of pairs of positive integers") from None
    if not arcs:
        raise MalformedArc("empty arc presentation")
    count: dict[int, int] = {}
    for a, b in arcs:
        if a < 1 or b < 1:
            raise MalformedArc("column indices must be positive")
        if a == b:
            raise MalformedArc(f"line [{a}, {b}] starts and ends in the same column")
        count[a] = count.get(a, 0) + 1
        count[b] = count.get(b, 0) + 1
    bad = [c for c, n in count.items() if n != 2]
    if bad:
        raise MalformedArc(f"columns {sorted(bad)} do not occur exactly twice")
    return ArcPresentation(arcs)


def crossing_count(a: ArcPresentation) -> int:
    return a.k


def mirror(a: ArcPresentation) -> ArcPresentation:
    """Mirror image: reflect the diagram left to right."""
    m = max(max(p) for p in a.arcs)
    return ArcPresentation(tuple((m + 1 - x, m + 1 - y) for x, y in a.arcs))


def connected_sum(a: ArcPresentation, b: ArcPresentation) -> ArcPresentation:
    """Connected sum of two knots.

    ``b`` is placed above and to the right of ``a``; the top line of ``a``
    and the bottom line of ``b`` exchange their inner endpoints, which joins
    the two knots by a band and adds one crossing.
    """
    n = max(max(p) for p in a.arcs)
    shifted = [(x + n, y + n) for x, y in b.arcs]
    lower = list(a.arcs)
    lo1, hi1 = min(lower[-1]), max(lower[-1])
    lo2, hi2 = min(shifted[0]), max(shifted[0])
    lower[-1] = (lo1, hi2)
    shifted[0] = (hi1, lo2)
    return parse_arc(lower + shifted)


UNKNOT = ((1, 2), (1, 2))
HOPF = ((1, 3), (2, 4), (1, 3), (2, 4))
TREFOIL = ((2, 5), (1, 3), (2, 4), (3, 5), (1, 4))


def standard_arc(name: str) -> ArcPresentation:
    """A few named diagrams: unknot, hopf, trefoil, mirror-trefoil, granny, reef."""
    t = parse_arc(TREFOIL)
    table = {
        "unknot": lambda: parse_arc(UNKNOT),
        "hopf": lambda: parse_arc(HOPF),
        "trefoil": lambda: t,
        "mirror-trefoil": lambda: mirror(t),
        "granny": lambda: connected_sum(t, t),
        "reef": lambda: connected_sum(t, mirror(t)),
    }
    if name not in table:
        raise MalformedArc(f"unknown diagram {name!r}; choose from {sorted(table)}")
    return table[name]()


# -- the punctured disk ---------------------------------------------------------

_D = 0.25      # half-width of strips
_TILT = 0.3    # slope separating a strip side from a hole arc leaving the same vertex


class _Planar:
    """Plane graph given by vertices and edges with outgoing directions at each end."""

    def __init__(self):
        self.pos: list[tuple[float, float]] = []
        self.edges: list[tuple[int, int]] = []
        self.dirs: list[tuple[tuple[float, float], tuple[float, float]]] = []

    def vertex(self, x, y) -> int:
        self.pos.append((x, y))
        return len(self.pos) - 1

    def edge(self, u, v, du=None, dv=None) -> int:
        pu, pv = self.pos[u], self.pos[v]
        if du is None:
            du = (pv[0] - pu[0], pv[1] - pu[1])
        if dv is None:
            dv = (pu[0] - pv[0], pu[1] - pv[1])
        self.edges.append((u, v))
        self.dirs.append((du, dv))
        return len(self.edges) - 1

    def faces(self) -> list[list[int]]:
        """Boundary walks of all faces (as edge lists) from the rotation system."""
        nv = len(self.pos)
        rot: list[list[tuple[float, int, int]]] = [[] for _ in range(nv)]
        for e, ((u, v), (du, dv)) in enumerate(zip(self.edges, self.dirs)):
            rot[u].append((math.atan2(du[1], du[0]), e, v))
            rot[v].append((math.atan2(dv[1], dv[0]), e, u))
        where: dict[tuple[int, int], int] = {}
        for v in range(nv):
            rot[v].sort()
            for i, (_, e, _) in enumerate(rot[v]):
                where[(v, e)] = i
        seen: set[tuple[int, int]] = set()
        out = []
        for e, (u, v) in enumerate(self.edges):
            for start in ((u, e), (v, e)):
                if start in seen:
                    continue
                walk = []
                cur = start
                while cur not in seen:
                    seen.add(cur)
                    x, f = cur
                    walk.append(f)
                    a, b = self.edges[f]
                    y = b if a == x else a
                    # turn: the edge just clockwise of the one we arrived by
                    i = where[(y, f)]
                    _, g, _ = rot[y][i - 1]
                    cur = (y, g)
                out.append(walk)
        return out


@dataclass
class PuncturedDisk:
    """Cell structure on the disk with two holes per horizontal line."""

    complex: RegularCW
    row_faces: list[list[int]]
    column_faces: list[list[int]]
    row_outline: list[list[int]]
    column_outline: list[list[int]]
    outer_arcs: list[int]


def punctured_disk(a: ArcPresentation) -> PuncturedDisk:
    """The planar structure: holes at line endpoints, squares at crossings, strips between.

    Each hole carries two vertices and two arcs, each crossing a square, and
    the sides of the horizontal and vertical strips join consecutive
    features.  An outer circle with two vertices is joined to the leftmost
    and rightmost vertices.  Needs a connected diagram.
    """
    if not a.is_connected_diagram():
        raise MalformedArc("the diagram is split; separate its components first")
    G = _Planar()
    cols = a.columns
    rows = {i: (min(p), max(p)) for i, p in enumerate(a.arcs, start=1)}
    hole: dict[tuple[int, int], dict] = {}
    for i, (lo, hi) in rows.items():
        for c in (lo, hi):
            other_c = hi if c == lo else lo
            r1, r2 = cols[c]
            other_r = r2 if i == r1 else r1
            sx = 1 if other_c > c else -1
            sy = 1 if other_r > i else -1
            u = G.vertex(c + sx * _D, i + sy * _D)
            w = G.vertex(c - sx * _D, i - sy * _D)
            arc_row = G.edge(u, w, (0, -sy), (sx, 0))
            arc_col = G.edge(u, w, (-sx, 0), (0, sy))
            hole[(i, c)] = dict(u=u, w=w, sx=sx, sy=sy, arc_row=arc_row, arc_col=arc_col)
    square: dict[tuple[int, int], dict] = {}
    for i, c in a.crossings:
        ll = G.vertex(c - _D, i - _D)
        lr = G.vertex(c + _D, i - _D)
        ul = G.vertex(c - _D, i + _D)
        ur = G.vertex(c + _D, i + _D)
        square[(i, c)] = dict(ll=ll, lr=lr, ul=ul, ur=ur,
                              bottom=G.edge(ll, lr), top=G.edge(ul, ur),
                              left=G.edge(ll, ul), right=G.edge(lr, ur))

    def side_vertex(H, along_row: bool, s: int) -> int:
        # vertex of hole H on the strip side s (+1: larger coordinate)
        key = "sy" if along_row else "sx"
        return H["u"] if H[key] == s else H["w"]

    def side_edge(H, v, other, along_row: bool) -> int:
        if v == H["w"]:
            d = (H["sx"], -H["sy"] * _TILT) if along_row else (-H["sx"] * _TILT, H["sy"])
            return G.edge(v, other, d, None)
        return G.edge(v, other)

    row_edges: dict[int, list[int]] = {}
    for i, (lo, hi) in rows.items():
        cs = sorted(c for r, c in a.crossings if r == i)
        es = []
        for s in (1, -1):
            Ha, Hb = hole[(i, lo)], hole[(i, hi)]
            start = side_vertex(Ha, True, s)
            pts = []
            for c in cs:
                sq = square[(i, c)]
                pts.append((sq["ul"] if s > 0 else sq["ll"], sq["ur"] if s > 0 else sq["lr"]))
            end = side_vertex(Hb, True, s)
            prev = start
            first = True
            for left, right in pts:
                es.append(side_edge(Ha, prev, left, True) if first else G.edge(prev, left))
                first = False
                prev = right
            if first:
                e = side_edge(Ha, start, end, True)
                if end == Hb["w"]:
                    # both ends leave a w-vertex: fix the far end's direction too
                    G.dirs[e] = (G.dirs[e][0], (Hb["sx"], -Hb["sy"] * _TILT))
                es.append(e)
            else:
                if end == Hb["w"]:
                    es.append(G.edge(prev, end, None, (Hb["sx"], -Hb["sy"] * _TILT)))
                else:
                    es.append(G.edge(prev, end))
        row_edges[i] = es
    col_edges: dict[int, list[int]] = {}
    for c, (r1, r2) in cols.items():
        rs = sorted(r for r, cc in a.crossings if cc == c)
        es = []
        for s in (1, -1):
            Ha, Hb = hole[(r1, c)], hole[(r2, c)]
            start = side_vertex(Ha, False, s)
            pts = []
            for r in rs:
                sq = square[(r, c)]
                pts.append((sq["lr"] if s > 0 else sq["ll"], sq["ur"] if s > 0 else sq["ul"]))
            end = side_vertex(Hb, False, s)
            prev = start
            first = True
            for bottom, top in pts:
                es.append(side_edge(Ha, prev, bottom, False) if first else G.edge(prev, bottom))
                first = False
                prev = top
            if first:
                e = side_edge(Ha, start, end, False)
                if end == Hb["w"]:
                    G.dirs[e] = (G.dirs[e][0], (-Hb["sx"] * _TILT, Hb["sy"]))
                es.append(e)
            else:
                if end == Hb["w"]:
                    es.append(G.edge(prev, end, None, (-Hb["sx"] * _TILT, Hb["sy"])))
                else:
                    es.append(G.edge(prev, end))
        col_edges[c] = es
    nv_diagram = len(G.pos)
    xs = [p[0] for p in G.pos]
    ys = [p[1] for p in G.pos]
    left = min(range(nv_diagram), key=lambda v: (xs[v], ys[v]))
    right = max(range(nv_diagram), key=lambda v: (xs[v], ys[v]))
    ymid = (min(ys) + max(ys)) / 2
    L = G.vertex(min(xs) - 2, ymid)
    R = G.vertex(max(xs) + 2, ymid)
    upper = G.edge(L, R, (0, 1), (0, 1))
    lower = G.edge(L, R, (0, -1), (0, -1))
    G.edge(L, left, (1, 0), (-1, 0))
    G.edge(R, right, (-1, 0), (1, 0))

    walks = G.faces()
    hole_pairs = {frozenset((H["arc_row"], H["arc_col"])) for H in hole.values()}
    outer = frozenset((upper, lower))
    faces = [w for w in walks if frozenset(w) not in hole_pairs and frozenset(w) != outer]
    h, k = a.h, a.k
    V, E = len(G.pos), len(G.edges)
    if V != 4 * h + 4 * k + 2 or E != 8 * h + 8 * k + 4 or len(faces) != 2 * h + 4 * k + 3:
        raise MalformedArc("internal error: planar structure has unexpected cell counts")
    if V - E + len(walks) != 2:
        raise MalformedArc("internal error: rotation system is not planar")

    X = from_boundaries([[[] for _ in range(V)], [list(e) for e in G.edges], faces], one_based=False)

    row_set = {}
    row_outline = []
    for i, (lo, hi) in rows.items():
        sqs = [square[(i, c)] for r, c in a.crossings if r == i]
        inner = set(row_edges[i]) | {hole[(i, c)][x] for c in (lo, hi) for x in ("arc_row", "arc_col")}
        inner |= {sq[x] for sq in sqs for x in ("top", "bottom", "left", "right")}
        row_set[i] = [f for f, w in enumerate(faces) if set(w) <= inner]
        row_outline.append(sorted(set(row_edges[i]) | {sq[x] for sq in sqs for x in ("top", "bottom")}
                                  | {hole[(i, lo)]["arc_col"], hole[(i, hi)]["arc_col"]}))
    col_set = {}
    col_outline = []
    for c, (r1, r2) in sorted(cols.items()):
        sqs = [square[(r, c)] for r, cc in a.crossings if cc == c]
        inner = set(col_edges[c]) | {hole[(r, c)][x] for r in (r1, r2) for x in ("arc_row", "arc_col")}
        inner |= {sq[x] for sq in sqs for x in ("top", "bottom", "left", "right")}
        col_set[c] = [f for f, w in enumerate(faces) if set(w) <= inner]
        col_outline.append(sorted(set(col_edges[c]) | {sq[x] for sq in sqs for x in ("left", "right")}
                                  | {hole[(r1, c)]["arc_row"], hole[(r2, c)]["arc_row"]}))
    return PuncturedDisk(X, [row_set[i] for i in sorted(row_set)], [col_set[c] for c in sorted(col_set)],
                         row_outline, col_outline, [upper, lower])


def knot_complement(a: ArcPresentation | list) -> RegularCW:
    """Regular CW-structure on the complement of an open tube around the link.

    Built as (punctured disk) x (interval), with a 2-cell under each
    horizontal line and over each vertical line, and a 2-cell plus a 3-cell
    closing off the bottom and the top.  The result has
    ``3(14h + 16k + 9) + 2h + 4`` cells for ``h`` lines and ``k`` crossings.
    """
    if not isinstance(a, ArcPresentation):
        a = parse_arc(a)
    P = punctured_disk(a)
    D = P.complex
    I = from_boundaries([[[], []], [[1, 2]]])
    Y = direct_product(D, I)
    data = [list(Y.boundary_lists(n)) for n in range(4)]
    data = [[list(b) for b in d] for d in data]

    def at(dim, idx, z):
        return product_index(D, I, CellRef(dim, idx), CellRef(0, z)).index

    faces_at = lambda z, fs: [at(2, f, z) for f in fs]
    caps_bottom, caps_top = [], []
    for outline in P.row_outline:
        data[2].append([at(1, e, 0) for e in outline])
        caps_bottom.append(len(data[2]) - 1)
    for outline in P.column_outline:
        data[2].append([at(1, e, 1) for e in outline])
        caps_top.append(len(data[2]) - 1)
    data[2].append([at(1, e, 0) for e in P.outer_arcs])
    hemi_bottom = len(data[2]) - 1
    data[2].append([at(1, e, 1) for e in P.outer_arcs])
    hemi_top = len(data[2]) - 1
    nf = D.nr_cells(2)
    in_rows = {f for fs in P.row_faces for f in fs}
    in_cols = {f for fs in P.column_faces for f in fs}
    bottom = faces_at(0, [f for f in range(nf) if f not in in_rows]) + caps_bottom + [hemi_bottom]
    top = faces_at(1, [f for f in range(nf) if f not in in_cols]) + caps_top + [hemi_top]
    data[3].append(bottom)
    data[3].append(top)
    props = {"arc": a.to_json(), "axis_cell": hemi_bottom, "h": a.h, "k": a.k}
    return from_boundaries(data, one_based=False, properties=props)


def expected_size(a: ArcPresentation) -> int:
    return 3 * (14 * a.h + 16 * a.k + 9) + 2 * a.h + 4


def knot_complement_with_axis(a: ArcPresentation | list) -> CWMap:
    """The complement together with a boundary disk away from the link, to spin about."""
    Y = knot_complement(a)
    masks = [np.zeros(Y.nr_cells(n), dtype=bool) for n in range(Y.dimension + 1)]
    masks[2][Y.properties["axis_cell"]] = True
    return inclusion(Y, closure_masks(Y, masks))


def arc_to_cubical(a: ArcPresentation | list) -> PureCubical:
    """Thickened link as a union of unit cubes.

    Column ``c`` sits at ``x = 2c`` and line ``i`` at ``y = 2i``; horizontal
    lines run at height 0, vertical segments at height 2, joined at their
    endpoints through height 1.  Result is shifted to start at the origin.
    """
    if not isinstance(a, ArcPresentation):
        a = parse_arc(a)
    m = max(max(p) for p in a.arcs)
    occ = np.zeros((2 * m - 1, 2 * a.h - 1, 3), dtype=bool)
    X = lambda c: 2 * (c - 1)
    Yc = lambda i: 2 * (i - 1)
    for i, (p, q) in enumerate(a.arcs, start=1):
        lo, hi = min(p, q), max(p, q)
        occ[X(lo):X(hi) + 1, Yc(i), 0] = True
        for c in (lo, hi):
            occ[X(c), Yc(i), :] = True
    for c, (r1, r2) in a.columns.items():
        occ[X(c), Yc(r1):Yc(r2) + 1, 2] = True
    return PureCubical(occ)
