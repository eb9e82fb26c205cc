"""Command-line interface.

Complexes are given as source strings: ``named:<name>`` for a library complex,
``arc:<json pairs>`` for a link complement, or inline JSON / a path to a
JSON file in the format of :mod:`cellhom.io`.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import io
from .builders import arcs, cubical, library
from .builders.spin import spin
from .builders.tubular import AssumptionViolated, tubular_complement
from .chains import NotAComplex
from .coefficients import NotAHomomorphism, PresentationMismatch, perm_module, tensor_with_module
from .covers import NotSubcomplex
from .cw import MalformedLattice, NotClosed, cellular_homology, direct_product, euler_characteristic
from .equivariant import universal_cover_chain_complex
from .fundamental_group import NotConnected, pi1_presentation, simplify_presentation
from .groups import Overflow, low_index_subgroups, todd_coxeter
from .homology import all_homology
from .invariants import InfiniteGroup, classify, invariant_I, invariant_J
from .morse import build_maximal_dvf, critical_cells, is_admissible, morse_chain_complex
from .simplify import simplify

log = logging.getLogger("cellhom")

PRECONDITION = 2
OVERFLOW = 3

_NAMED = {
    "point": library.point, "circle": library.circle, "torus": library.torus,
    "klein-bottle": library.klein_bottle, "projective-plane": library.projective_plane,
    "annulus": library.figure_annulus,
}


def resolve(source: str):
    if source.startswith("named:"):
        name = source[len("named:"):]
        if name.startswith("sphere") and name[6:].isdigit():
            return library.sphere(int(name[6:]))
        if name.startswith("ball") and name[4:].isdigit():
            return library.ball(int(name[4:]))
        if name in _NAMED:
            return _NAMED[name]()
        try:
            return arcs.knot_complement(arcs.standard_arc(name))
        except arcs.MalformedArc:
            raise ValueError(f"unknown complex {name!r}") from None
    if source.startswith("arc:"):
        return arcs.knot_complement(io.load_arc(source[len("arc:"):]))
    return io.load_complex(source)


def _arc(text: str) -> arcs.ArcPresentation:
    t = text.strip()
    if t[:1] not in "[{" and not t.endswith(".json"):
        return arcs.standard_arc(t)
    return io.load_arc(t)


def _summary(X) -> dict:
    return {"size": X.size, "cells": X.cell_counts(), "euler_characteristic": euler_characteristic(X)}


def _homology_lists(groups) -> list[list[int]]:
    return [list(g) for g in groups]


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data))
    else:
        print(text)


def _save(args, X) -> None:
    if getattr(args, "output", None):
        io.save_complex(X, args.output)


def _fmt_cells(X) -> str:
    return f"size {X.size}, cells per dimension {X.cell_counts()}"


# -- subcommands ----------------------------------------------------------------

def cmd_complement(args) -> None:
    if args.arc:
        a = _arc(args.arc)
        X = arcs.knot_complement(a)
        extra = {"h": a.h, "k": a.k}
    elif args.cubical:
        X = cubical.to_regular_cw(cubical.pure_complement(io.load_cubical(args.cubical)))
        extra = {}
    else:
        raise ValueError("give --arc or --cubical")
    _save(args, X)
    _emit(args, {**_summary(X), **extra}, f"complement: {_fmt_cells(X)}")


def cmd_simplify(args) -> None:
    X = resolve(args.complex)
    Y = simplify(X)
    _save(args, Y)
    _emit(args, {"before": X.size, "after": Y.size, "cells": Y.cell_counts()},
          f"simplified {X.size} -> {Y.size} cells {Y.cell_counts()}")


def cmd_product(args) -> None:
    X = direct_product(*[resolve(s) for s in args.factors])
    _save(args, X)
    _emit(args, _summary(X), f"product: {_fmt_cells(X)}")


def cmd_homology(args) -> None:
    X = resolve(args.complex)
    H = cellular_homology(X)
    degrees = [args.degree] if args.degree is not None else range(len(H))
    rows = {n: list(H[n]) if n < len(H) else [] for n in degrees}
    from .snf import AbelianInvariants
    text = "\n".join(f"H_{n} = {AbelianInvariants(v).human()}" for n, v in rows.items())
    _emit(args, {"homology": {str(n): v for n, v in rows.items()}}, text)


def cmd_morse(args) -> None:
    X = resolve(args.complex)
    V = build_maximal_dvf(X)
    crit = critical_cells(X, V).counts()
    M = morse_chain_complex(X, V)
    H = all_homology(M)
    data = {"critical_cells": crit, "admissible": is_admissible(X, V), "homology": _homology_lists(H)}
    text = f"critical cells {crit}\n" + "\n".join(f"H_{n} = {h.human()}" for n, h in enumerate(H))
    _emit(args, data, text)


def cmd_pi1(args) -> None:
    X = resolve(args.complex)
    P = pi1_presentation(X)
    if args.simplify:
        P = simplify_presentation(P).presentation
    from .words import format_word
    text = f"{P.generator_count} generator(s)\n" + "\n".join(f"  {format_word(r)}" for r in P.relators)
    _emit(args, P.to_json(), text)


def cmd_cover(args) -> None:
    X = resolve(args.complex)
    C = universal_cover_chain_complex(X)
    if args.subgroup is not None:
        words = [tuple(w) for w in json.loads(args.subgroup)]
        tables = [todd_coxeter(C.group, words, max_cosets=args.max_cosets)]
    else:
        if args.index is None:
            raise ValueError("give --index or --subgroup")
        tables = low_index_subgroups(simplify_presentation(C.group), args.index, exact=not args.all_indices)
    rows = []
    for k, T in enumerate(tables):
        D = tensor_with_module(C, perm_module(C.group, T))
        H = all_homology(D)
        rows.append({"subgroup": k + 1, "index": T.index, "cover_size": X.size * T.index,
                     "homology": _homology_lists(H)})
    text = "\n".join(f"#{r['subgroup']} index {r['index']} size {r['cover_size']}: "
                     + ", ".join(str(h) for h in r["homology"]) for r in rows)
    _emit(args, {"covers": rows}, text or "no subgroups")


def _stderr_progress(args):
    return sys.stderr if not args.quiet else None


def cmd_invariant_i(args) -> None:
    X = resolve(args.complex)
    R = invariant_I(X, args.index, args.degree, exact=not args.all_indices, jobs=args.jobs,
                    progress=_stderr_progress(args))
    _emit(args, R.to_json(), R.text())


def cmd_invariant_j(args) -> None:
    Y = arcs.knot_complement(_arc(args.arc))
    R = invariant_J(Y, args.index, exact=not args.all_indices, jobs=args.jobs,
                    progress=_stderr_progress(args))
    _emit(args, R.to_json(), R.text())


def cmd_spin(args) -> None:
    i = arcs.knot_complement_with_axis(_arc(args.arc))
    S = spin(i)
    _save(args, S)
    H = cellular_homology(S)
    _emit(args, {**_summary(S), "homology": _homology_lists(H)},
          f"spun complement: {_fmt_cells(S)}\nhomology {_homology_lists(H)}")


def cmd_excise(args) -> None:
    X = resolve(args.complex)
    cells = [(int(n), int(k) - 1) for n, k in json.loads(args.subcomplex)]
    W = tubular_complement(X, cells)
    _save(args, W)
    H = cellular_homology(W)
    _emit(args, {**_summary(W), "homology": _homology_lists(H)},
          f"excised: {_fmt_cells(W)}\nhomology {_homology_lists(H)}")


def cmd_classify(args) -> None:
    W, X = resolve(args.source), resolve(args.target)
    phi = json.loads(args.phi)
    A = classify(W, X, phi, args.degree, max_cosets=args.max_cosets)
    _emit(args, {"classes": list(A)}, f"H^{args.degree}(W, H_{args.degree}(X~)) = {A.human()}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cellhom", description="Homology of regular CW-complexes, their covers and link complements.")
    p.add_argument("--json", action="store_true", help="print results as JSON")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(fn=fn)
        s.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        return s

    s = add("complement", cmd_complement, "complement of a link (arc presentation) or cubical complex")
    s.add_argument("--arc", help="JSON list of pairs, a JSON file, or a name such as trefoil")
    s.add_argument("--cubical", help="PureCubical JSON or path")
    s.add_argument("--output", "-o")

    s = add("simplify", cmd_simplify, "merge cells while preserving homeomorphism type")
    s.add_argument("complex")
    s.add_argument("--output", "-o")

    s = add("product", cmd_product, "direct product of complexes")
    s.add_argument("factors", nargs="+")
    s.add_argument("--output", "-o")

    s = add("homology", cmd_homology, "integral cellular homology")
    s.add_argument("complex")
    s.add_argument("--degree", type=int)

    s = add("morse", cmd_morse, "critical cells and homology of the Morse complex")
    s.add_argument("complex")

    s = add("pi1", cmd_pi1, "presentation of the fundamental group")
    s.add_argument("complex")
    s.add_argument("--simplify", action="store_true")

    s = add("cover", cmd_cover, "homology of finite covers")
    s.add_argument("complex")
    s.add_argument("--index", type=int)
    s.add_argument("--subgroup", help="JSON list of subgroup generator words")
    s.add_argument("--all-indices", action="store_true", help="include indices below --index")
    s.add_argument("--max-cosets", type=int, default=10**6)

    for name, fn in (("invariant-i", cmd_invariant_i), ("invariant-j", cmd_invariant_j)):
        s = add(name, fn, f"the {name[-1].upper()}_c invariant")
        if name == "invariant-i":
            s.add_argument("complex")
            s.add_argument("--degree", type=int, default=2)
        else:
            s.add_argument("--arc", required=True)
        s.add_argument("--index", type=int, required=True)
        s.add_argument("--all-indices", action="store_true")
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--quiet", action="store_true", help="no per-subgroup progress on stderr")

    s = add("spin", cmd_spin, "spin a link complement about a boundary disk")
    s.add_argument("--arc", required=True)
    s.add_argument("--output", "-o")

    s = add("excise", cmd_excise, "complement of an open neighbourhood of a subcomplex")
    s.add_argument("complex")
    s.add_argument("--subcomplex", required=True, help="JSON list of [dimension, 1-based index]")
    s.add_argument("--output", "-o")

    s = add("classify", cmd_classify, "homotopy classes of maps W -> X inducing phi")
    s.add_argument("--source", required=True, help="W")
    s.add_argument("--target", required=True, help="X")
    s.add_argument("--phi", required=True, help="JSON list of words, one per generator of pi_1 W")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--max-cosets", type=int, default=10**5)
    return p


_PRECONDITION_ERRORS = (arcs.MalformedArc, cubical.EmptyComplex, cubical.UnassignedCube,
                        MalformedLattice, NotClosed, NotConnected, NotSubcomplex, NotAComplex,
                        AssumptionViolated, NotAHomomorphism, PresentationMismatch,
                        ValueError, KeyError, OSError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.fn(args)
    except (Overflow, InfiniteGroup) as exc:
        print(f"cellhom: {exc}", file=sys.stderr)
        return OVERFLOW
    except _PRECONDITION_ERRORS as exc:
        print(f"cellhom: {exc}", file=sys.stderr)
        return PRECONDITION
    return 0


if __name__ == "__main__":
    sys.exit(main())
