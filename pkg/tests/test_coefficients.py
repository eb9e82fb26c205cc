from itertools import product

import numpy as np
import pytest

from cellhom.builders import arcs
from cellhom.builders.library import _RP2, circle, figure_annulus, projective_plane
from cellhom.coefficients import (NotAHomomorphism, NotAModule, PresentationMismatch, ZGModule,
                                  hom_with_module, module_via_homomorphism, perm_module, sign_module,
                                  tensor_with_module, trivial_module)
from cellhom.cw import direct_product
from cellhom.equivariant import universal_cover_chain_complex
from cellhom.fundamental_group import FpPresentation, pi1_presentation, simplify_presentation
from cellhom.groups import low_index_subgroups, todd_coxeter
from cellhom.homology import all_homology, homology
from cellhom.simplify import simplify
from oracles import twisted_cohomology_rp2


def _characters(P):
    """Every nontrivial homomorphism to {+1, -1}, as a sign per generator."""
    out = []
    for signs in product((1, -1), repeat=P.generator_count):
        if -1 in signs and all(np.prod([signs[abs(x) - 1] for x in r]) == 1 for r in P.relators):
            out.append(list(signs))
    return out


def test_perm_module_examples():
    Z = FpPresentation(1, [])
    assert perm_module(Z, todd_coxeter(Z, [(1,)])).rank == 1
    A = perm_module(Z, todd_coxeter(Z, [(1, 1)]))
    assert A.rank == 2 and A.matrix((1,)).tolist() == [[0, 1], [1, 0]]


def test_four_torus_cover_module():
    S1 = simplify(figure_annulus())
    C = universal_cover_chain_complex(direct_product(S1, S1, S1, S1))
    P = C.group
    A = perm_module(P, todd_coxeter(P, [(1,) * 5, (2,) * 5, (3,) * 5, (4,)]))
    assert A.rank == 125
    for i in range(1, 5):
        for j in range(1, 5):
            assert (A.matrix((i, j)) == A.matrix((j, i))).all()
    D = tensor_with_module(C, A)
    assert D.ranks[:5] == [125 * r for r in C.ranks[:5]]
    assert [list(h) for h in all_homology(D)][:5] == [[0], [0] * 4, [0] * 6, [0] * 4, [0]]


def test_trivial_module_ranks(complexes):
    C = universal_cover_chain_complex(complexes["torus"])
    assert tensor_with_module(C, trivial_module(C.group)).ranks == C.ranks
    assert tensor_with_module(C, trivial_module(C.group, 3)).ranks == [3 * r for r in C.ranks]


def test_circle_cohomology():
    C = universal_cover_chain_complex(circle())
    D = hom_with_module(C, trivial_module(C.group))
    assert D.cochain and [list(h) for h in all_homology(D)] == [[0], [0]]


def test_twisted_projective_plane_matches_cochain_oracle():
    C = universal_cover_chain_complex(projective_plane())
    (signs,) = _characters(C.group)
    D = hom_with_module(C, sign_module(C.group, signs))
    assert list(homology(D, 2)) == twisted_cohomology_rp2(_RP2) == [0]


def test_zero_module():
    C = universal_cover_chain_complex(circle())
    D = tensor_with_module(C, trivial_module(C.group, 0))
    assert D.ranks == [0, 0]


def test_presentation_mismatch(complexes):
    C = universal_cover_chain_complex(complexes["torus"])
    with pytest.raises(PresentationMismatch):
        tensor_with_module(C, trivial_module(FpPresentation(1, [])))
    with pytest.raises(PresentationMismatch):
        hom_with_module(C, trivial_module(FpPresentation(1, [])))


def test_relators_must_act_trivially():
    with pytest.raises(NotAModule):
        sign_module(FpPresentation(1, [(1,)]), [-1])


def test_pullback_along_homomorphisms():
    P = FpPresentation(2, [(1, 2, -1, -2)])
    A = perm_module(P, todd_coxeter(P, [(1, 1), (2,)]))
    same = module_via_homomorphism([(1,), (2,)], P, A)
    assert all((same.action[i] == A.action[i]).all() for i in range(2))
    triv = module_via_homomorphism([(), ()], P, A)
    assert all((M == np.identity(2, dtype=object)).all() for M in triv.action)
    with pytest.raises(NotAHomomorphism):
        module_via_homomorphism([(1,)], FpPresentation(1, [(1,)]), A)


def test_knot_group_sign_quotient():
    # Z/2 quotient of the trefoil group acting on Z by -1
    P = pi1_presentation(arcs.knot_complement(arcs.TREFOIL))
    chars = _characters(P)
    assert chars
    Zpres = FpPresentation(1, [(1, 1)])
    A = sign_module(Zpres, [-1])
    for signs in chars:
        phi = [(1,) if s < 0 else () for s in signs]
        B = module_via_homomorphism(phi, P, A)
        assert [int(M[0, 0]) for M in B.action] == signs


def test_cover_complexes_are_complexes_and_connected(complexes):
    for name in ("klein_bottle", "hopf_complement", "trefoil_complement"):
        C = universal_cover_chain_complex(complexes[name])
        for T in low_index_subgroups(simplify_presentation(C.group), 4):
            A = perm_module(C.group, T)
            D = tensor_with_module(C, A)
            E = hom_with_module(C, A)
            assert D.ranks == [A.rank * r for r in C.ranks]
            for n in range(2, D.length + 1):
                assert (D.differential(n - 1) @ D.differential(n)).count_nonzero() == 0
                assert (E.differential(n - 1) @ E.differential(n - 2)).count_nonzero() == 0
            assert list(homology(D, 0)) == [0]


def test_module_with_torsion():
    P = FpPresentation(1, [])
    A = ZGModule(P, 1, [np.array([[1]], dtype=object)], relations=[[3]])
    assert A.abelian_invariants == (3,)
    C = universal_cover_chain_complex(circle())
    assert C.group.generator_count == 1
    D = tensor_with_module(C, module_via_homomorphism([(1,)], C.group, A))
    # circle with Z/3 coefficients
    assert [list(h) for h in all_homology(D)] == [[3], [3]]
