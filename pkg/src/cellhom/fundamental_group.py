"""Presentations of the fundamental group read off a discrete vector field.

Generators are the critical 1-cells and relators the critical 2-cells.  Each
edge ``e`` (oriented from the first to the second vertex in its boundary
list) carries a word ``omega(e)`` in the generators: trivial on the spanning
tree formed by the vertex-edge arrows, a single letter on a critical edge,
and for an edge paired with a 2-cell the word forced by that 2-cell's
boundary circuit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .cw import RegularCW, incidence_signs, is_connected
from .morse import DiscreteVectorField, build_maximal_dvf, critical_cells, flow_order
from .snf import AbelianInvariants, cokernel_invariants
from .words import inverse, multiply, reduce_word, substitute


class NotConnected(ValueError):
    pass


class CircuitNotClosed(ValueError):
    pass


@dataclass
class FpPresentation:
    """Finite presentation; words are tuples of signed 1-based generator indices."""

    generator_count: int
    relators: list[tuple[int, ...]]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.relators = [reduce_word(r) for r in self.relators]
        for r in self.relators:
            if any(x == 0 or abs(x) > self.generator_count for x in r):
                raise ValueError(f"relator {r} uses an unknown generator")

    def abelianization(self) -> AbelianInvariants:
        n = self.generator_count
        if n == 0:
            return AbelianInvariants()
        cols = []
        for r in self.relators:
            v = [0] * n
            for x in r:
                v[abs(x) - 1] += 1 if x > 0 else -1
            if any(v):
                cols.append(v)
        if not cols:
            return AbelianInvariants([0] * n)
        M = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
        return cokernel_invariants(M)

    def to_json(self) -> dict:
        return {"generators": self.generator_count, "relators": [list(r) for r in self.relators]}

    @classmethod
    def from_json(cls, data) -> "FpPresentation":
        return cls(int(data["generators"]), [tuple(r) for r in data["relators"]])

    def __eq__(self, other):
        return (isinstance(other, FpPresentation) and self.generator_count == other.generator_count
                and self.relators == other.relators)


@dataclass
class OmegaMap:
    """Spanning tree of the 1-skeleton and the word attached to every edge.

    Edge ``e`` runs from ``tails[e]`` to ``heads[e]``; ``words[e]`` is empty
    for tree edges.
    """

    tree: set[int]
    tails: list[int]
    heads: list[int]
    words: list[tuple[int, ...]]
    base: int = 0
    generator_edges: list[int] = field(default_factory=list)

    def path_word(self, circuit) -> tuple[int, ...]:
        """Word of an oriented edge path given as ``(edge, +1 | -1)`` pairs."""
        out = []
        for e, d in circuit:
            out.append(self.words[e] if d > 0 else inverse(self.words[e]))
        return multiply(*out)


def _require_connected(X: RegularCW):
    if X.nr_cells(0) == 0 or not is_connected(X):
        raise NotConnected("complex is not path-connected")


def _endpoints(X: RegularCW):
    if "ends" not in X._blists:
        idx = X.csr(1)[1]
        X._blists["ends"] = (idx[0::2].tolist(), idx[1::2].tolist())
    return X._blists["ends"]


def maximal_tree(X: RegularCW) -> OmegaMap:
    """Breadth-first spanning tree from vertex 0; each non-tree edge is its own generator."""
    _require_connected(X)
    tails, heads = _endpoints(X)
    nv = X.nr_cells(0)
    adj: list[list[int]] = [[] for _ in range(nv)]
    for e, (a, b) in enumerate(zip(tails, heads)):
        adj[a].append(e)
        adj[b].append(e)
    seen = [False] * nv
    seen[0] = True
    tree: set[int] = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e in adj[v]:
            w = heads[e] if tails[e] == v else tails[e]
            if not seen[w]:
                seen[w] = True
                tree.add(e)
                queue.append(w)
    gens = [e for e in range(len(tails)) if e not in tree]
    words: list[tuple[int, ...]] = [()] * len(tails)
    for i, e in enumerate(gens):
        words[e] = (i + 1,)
    return OmegaMap(tree, tails, heads, words, 0, gens)


def boundary_circuit(X: RegularCW, t: int, signs=None) -> list[tuple[int, int]]:
    """Closed edge path around the 2-cell ``t``, following its orientation.

    Starts with the first edge of the boundary list; an edge with incidence
    ``+1`` is traversed from tail to head.
    """
    tails, heads = _endpoints(X)
    edges = X.boundary(2, t).tolist()
    if signs is None:
        signs = incidence_signs(X)
    p = X.csr(2)[0]
    eps = signs[2][p[t]:p[t + 1]].tolist()
    at: dict[int, list[int]] = {}
    for e in edges:
        at.setdefault(tails[e], []).append(e)
        at.setdefault(heads[e], []).append(e)
    e0 = edges[0]
    d0 = eps[0]
    out = [(e0, d0)]
    cur = heads[e0] if d0 > 0 else tails[e0]
    prev = e0
    for _ in range(len(edges) - 1):
        a, b = at[cur]
        e = b if a == prev else a
        d = 1 if tails[e] == cur else -1
        out.append((e, d))
        cur = heads[e] if d > 0 else tails[e]
        prev = e
    return out


def omega_map(X: RegularCW, V: DiscreteVectorField, signs=None) -> OmegaMap:
    """Edge words determined by the vector field ``V``.

    Requires a unique critical vertex; the vertex-edge arrows then form a
    spanning tree.
    """
    _require_connected(X)
    crit = critical_cells(X, V)
    if len(crit[0]) != 1:
        raise ValueError("vector field must have exactly one critical vertex")
    if signs is None:
        signs = incidence_signs(X)
    tails, heads = _endpoints(X)
    ne = len(tails)
    tree = set(np.flatnonzero(V.down[1] >= 0).tolist()) if len(V.down) > 1 else set()
    gens = crit[1] if len(crit) > 1 else []
    words: list[tuple[int, ...] | None] = [None] * ne
    for e in tree:
        words[e] = ()
    for i, e in enumerate(gens):
        words[e] = (i + 1,)
    if len(V.up) > 2:
        up = V.up[2]
        for e in reversed(flow_order(X, V, 1)):
            t = int(up[e])
            circ = boundary_circuit(X, t, signs)
            k = next(i for i, (f, _) in enumerate(circ) if f == e)
            d = circ[k][1]
            rest = circ[k + 1:] + circ[:k]
            w = multiply(*[words[f] if s > 0 else inverse(words[f]) for f, s in rest])
            # omega(e)^d * w = 1
            words[e] = inverse(w) if d > 0 else w
    return OmegaMap(tree, tails, heads, words, crit[0][0], list(gens))


def deform_circuit(X: RegularCW, V: DiscreteVectorField, circuit, omega: OmegaMap | None = None) -> tuple[int, ...]:
    """Word in the critical-edge generators represented by a closed edge path."""
    tails, heads = _endpoints(X)
    circuit = [(int(e), int(d)) for e, d in circuit]
    for (e, d), (f, c) in zip(circuit, circuit[1:] + circuit[:1]):
        end = heads[e] if d > 0 else tails[e]
        start = tails[f] if c > 0 else heads[f]
        if end != start:
            raise CircuitNotClosed("edge path is not closed")
    if omega is None:
        omega = omega_map(X, V)
    return omega.path_word(circuit)


def pi1_presentation(X: RegularCW, V: DiscreteVectorField | None = None,
                     omega: OmegaMap | None = None) -> FpPresentation:
    """One generator per critical 1-cell and one relator per critical 2-cell."""
    _require_connected(X)
    if V is None:
        V = build_maximal_dvf(X)
    signs = incidence_signs(X)
    if omega is None:
        omega = omega_map(X, V, signs)
    crit = critical_cells(X, V)
    rel_cells = crit[2] if len(crit) > 2 else []
    relators = [omega.path_word(boundary_circuit(X, t, signs)) for t in rel_cells]
    prov = {"generators": list(omega.generator_edges), "relators": list(rel_cells)}
    return FpPresentation(len(omega.generator_edges), relators, prov)


# -- Tietze post-pass --------------------------------------------------------

@dataclass
class SimplifiedPresentation:
    """A smaller presentation with the images of the original generators in it."""

    presentation: FpPresentation
    images: list[tuple[int, ...]]
    original: FpPresentation


def simplify_presentation(P: FpPresentation, max_relator_length: int = 2) -> SimplifiedPresentation:
    """Eliminate generators occurring once in a short relator.

    A generator ``x`` occurring exactly once in a relator of length at most
    ``max_relator_length`` is rewritten in terms of the others and removed.
    Trivial and repeated relators are dropped.  ``images[i]`` expresses
    original generator ``i+1`` in the surviving generators.
    """
    n = P.generator_count
    images: list[tuple[int, ...]] = [(i + 1,) for i in range(n)]
    alive = set(range(1, n + 1))
    rels = [reduce_word(r) for r in P.relators]
    changed = True
    while changed:
        changed = False
        rels = _clean_relators(rels)
        for r in sorted(rels, key=len):
            if len(r) > max_relator_length:
                break
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            pick = next((abs(x) for x in r if counts[abs(x)] == 1), None)
            if pick is None:
                continue
            k = next(i for i, x in enumerate(r) if abs(x) == pick)
            # r = u x^s v = 1  =>  x = (v u)^-s
            u, s, v = r[:k], r[k], r[k + 1:]
            val = multiply(v, u)
            val = inverse(val) if s > 0 else val
            sub = [(g,) for g in range(1, n + 1)]
            sub[pick - 1] = val
            rels = [substitute(w, sub) for w in rels]
            images = [substitute(w, sub) for w in images]
            alive.discard(pick)
            changed = True
            break
    keep = sorted(alive)
    renum = [()] * n
    for i, g in enumerate(keep):
        renum[g - 1] = (i + 1,)
    rels = [substitute(w, renum) for w in _clean_relators(rels)]
    images = [substitute(w, renum) for w in images]
    Q = FpPresentation(len(keep), rels, {"eliminated": [g for g in range(1, n + 1) if g not in alive]})
    return SimplifiedPresentation(Q, images, P)


def _clean_relators(rels):
    out, seen = [], set()
    for r in rels:
        r = _cyclic(r)
        if not r:
            continue
        key = min(_rotations(r) + _rotations(inverse(r)))
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def _cyclic(w):
    w = list(reduce_word(w))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def _rotations(w):
    return [w[i:] + w[:i] for i in range(len(w))] or [w]
