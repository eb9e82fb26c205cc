"""Cover-based invariants and the homotopy classification of maps.

``invariant_I`` collects the degree-``n`` homology of all ``c``-fold covers
of a complex.  ``invariant_J`` collects the cokernels of
``H_1(B_j) -> H_1(cover)`` over the path components ``B_j`` of the preimage
of the boundary of a link complement.  ``classify`` computes
``H^n(W, H_n(universal cover of X))`` with the action pulled back along a
homomorphism of fundamental groups.
"""

from __future__ import annotations

import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .chains import IntChainComplex
from .coefficients import (ZGModule, hom_with_module, module_from_left_action,
                           module_via_homomorphism, perm_module, tensor_with_module)
from .covers import CWMap, boundary_inclusion, covering_cw, lift_data, lifted_map
from .cw import RegularCW, representative_vertices, signed_chain_complex, vertex_components
from .equivariant import universal_cover_chain_complex
from .fundamental_group import pi1_presentation, simplify_presentation
from .groups import CosetTable, Overflow, low_index_subgroups, todd_coxeter
from .homology import HomologyGroup, cohomology, homology
from .snf import AbelianInvariants


class InfiniteGroup(RuntimeError):
    """The fundamental group could not be shown finite within the coset limit."""


@dataclass
class InvariantReport:
    """Sorted set of abelian groups with one detail row per subgroup (and component)."""

    name: str
    c: int
    values: list[AbelianInvariants]
    rows: list[dict] = field(default_factory=list)

    def __contains__(self, item) -> bool:
        return AbelianInvariants(item) in self.values

    def to_json(self) -> dict:
        return {"invariant": self.name, "c": self.c,
                "values": [list(v) for v in self.values],
                "rows": self.rows}

    def text(self) -> str:
        lines = [f"{self.name}_{self.c}: {len(self.values)} isomorphism type(s)"]
        lines += [f"  {v.human():<30} {v.gap()}" for v in self.values]
        return "\n".join(lines)


def _report(name, c, rows, key) -> InvariantReport:
    values = sorted({AbelianInvariants(r[key]) for r in rows})
    return InvariantReport(name, c, values, rows)


def _map(fn, items, jobs):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _progress(stream, msg):
    if stream is not None:
        print(msg, file=stream, flush=True)


def invariant_I(X: RegularCW, c: int, n: int = 2, exact: bool = True, jobs: int = 1,
                progress=None) -> InvariantReport:
    """``H_n`` of the covers of ``X`` of index ``c`` (at most ``c`` unless ``exact``)."""
    C = universal_cover_chain_complex(X)
    tables = low_index_subgroups(simplify_presentation(C.group), c, exact=exact)

    def one(item):
        k, T = item
        H = homology(tensor_with_module(C, perm_module(C.group, T)), n)
        _progress(progress, f"subgroup {k + 1}/{len(tables)}: index {T.index}, H_{n} = {H.human()}")
        return {"subgroup": k + 1, "index": T.index, "homology": list(H)}

    rows = _map(one, list(enumerate(tables)), jobs)
    return _report("I", c, rows, "homology")


def relative_homology(X: RegularCW, masks, n: int, C: IntChainComplex | None = None) -> AbelianInvariants:
    """``H_n(X, A)`` for the subcomplex ``A`` given by boolean masks."""
    C = C or signed_chain_complex(X)
    keep = [np.flatnonzero(~np.asarray(m, dtype=bool)) for m in masks]
    while len(keep) < X.dimension + 1:
        keep.append(np.arange(X.nr_cells(len(keep))))
    maps = {}
    for k in range(1, X.dimension + 1):
        maps[k] = C.differential(k)[keep[k - 1]][:, keep[k]]
    Q = IntChainComplex([len(k) for k in keep], maps)
    return homology(Q, n)


def cover_boundary_cokernels(Y: RegularCW, f: CWMap, T: CosetTable, lifted=None) -> list[AbelianInvariants]:
    """Cokernels of ``H_1(B_j) -> H_1(cover)`` over components ``B_j`` of the preimage of ``f``.

    For a connected ``B_j`` in a connected cover this cokernel is the
    relative group ``H_1(cover, B_j)``, which is what is computed.
    """
    p = covering_cw(Y, T, lifted)
    ft = lifted_map(f, p)
    cover = p.source
    C = signed_chain_complex(cover)
    B = ft.source
    ncomp, label = vertex_components(B)
    reps = representative_vertices(B)
    out = []
    for j in range(ncomp):
        masks = []
        for n in range(cover.dimension + 1):
            m = np.zeros(cover.nr_cells(n), dtype=bool)
            if n < len(reps) and len(reps[n]):
                m[ft.assignment[n][label[reps[n]] == j]] = True
            masks.append(m)
        out.append(relative_homology(cover, masks, 1, C))
    return out


def invariant_J(Y: RegularCW, c: int, f: CWMap | None = None, exact: bool = True, jobs: int = 1,
                progress=None) -> InvariantReport:
    """Boundary cokernels over the ``c``-fold covers of the link complement ``Y``.

    ``f`` defaults to the inclusion of the closure of the 2-cells lying on
    exactly one 3-cell.
    """
    f = f or boundary_inclusion(Y)
    lifted = lift_data(Y)
    P = pi1_presentation(Y)
    tables = low_index_subgroups(simplify_presentation(P), c, exact=exact)

    def one(item):
        k, T = item
        cok = cover_boundary_cokernels(Y, f, T, lifted)
        _progress(progress, f"subgroup {k + 1}/{len(tables)}: index {T.index}, "
                            + ", ".join(g.human() for g in cok))
        return [{"subgroup": k + 1, "index": T.index, "component": j + 1, "cokernel": list(g)}
                for j, g in enumerate(cok)]

    rows = [r for rs in _map(one, list(enumerate(tables)), jobs) for r in rs]
    return _report("J", c, rows, "cokernel")


def universal_cover_homology_module(X: RegularCW, n: int, max_cosets: int = 10**5) -> ZGModule:
    """``H_n`` of the universal cover of ``X`` with its deck-transformation action.

    Needs a finite fundamental group; raises :class:`InfiniteGroup` when
    enumerating the cosets of the trivial subgroup overflows.
    """
    omega, L = lift_data(X)
    P = pi1_presentation(X)
    try:
        T = todd_coxeter(P, (), max_cosets=max_cosets)
    except Overflow:
        raise InfiniteGroup(f"fundamental group has more than {max_cosets} elements or is infinite") from None
    p = covering_cw(X, T, (omega, L))
    cover = p.source
    C = signed_chain_complex(cover)
    H = HomologyGroup(C, n)
    N = T.index
    reps = T.coset_representatives()
    gens = H.generators
    r = len(gens)
    left = []
    for x in range(1, P.generator_count + 1):
        # deck transformation: coset g -> x g
        perm = np.array([T.act(0, (x,) + reps[cc]) for cc in range(N)], dtype=np.int64)
        assign = [np.arange(cover.nr_cells(k)) // N * N + perm[np.arange(cover.nr_cells(k)) % N]
                  for k in range(cover.dimension + 1)]
        deck = CWMap(cover, cover, assign)
        M = deck.chain_map(n, C.signs, C.signs)
        L_ = np.zeros((r, r), dtype=object)
        for j, g in enumerate(gens):
            img = M @ np.asarray(g, dtype=np.int64)
            L_[:, j] = H.coordinates(img)
        left.append(L_)
    tors = [i for i, d in enumerate(H.orders) if d]
    rel = None
    if tors:
        rel = np.zeros((r, len(tors)), dtype=object)
        for j, i in enumerate(tors):
            rel[i, j] = H.orders[i]
    return module_from_left_action(P, r, left, rel)


def classify(W: RegularCW, X: RegularCW, phi, n: int, max_cosets: int = 10**5) -> AbelianInvariants:
    """``H^n(W, H_n(X~))`` with ``pi_1 W`` acting through ``phi``.

    ``phi[i]`` is the image in ``pi_1 X`` (as a word in the generators of
    ``pi1_presentation(X)``) of generator ``i+1`` of ``pi1_presentation(W)``.
    When ``X`` has finite fundamental group, ``dim W = n`` and
    ``pi_i X = 0`` for ``2 <= i < n``, this group is in (non-canonical)
    bijection with the homotopy classes of maps ``W -> X`` inducing ``phi``;
    the last hypothesis is not checked.
    """
    A = universal_cover_homology_module(X, n, max_cosets)
    C = universal_cover_chain_complex(W)
    B = module_via_homomorphism([tuple(w) for w in phi], C.group, A)
    return homology(hom_with_module(C, B), n)
