"""
catalog/bundled.py

The named instances shipped with the lab.  Each builder returns a Bundle
holding the categories, the transformation data and a few structures ready
to lift.

    sierpinski  one-point space and Sierpinski space, with their closure,
                topogenous order, entourage base and syntopogenous structure
    ind3        the indiscrete 3-point space and its T0 reflection
    t0          a 3-point space that is not T0, its reflection (pointed) and
                the reflector -| inclusion adjunction
    sym         preorders on two points and the symmetrization (copointed)
    alexandrov  specialization -| Alexandrov topology on Sierpinski and the
                3-point space
    forgetful   four small spaces (and their subspaces) over finite sets
"""

from __future__ import annotations

from dataclasses import replace
from typing import Callable

from catalog.builders import (
    alexandrov_adjunction,
    build_fintop_category,
    entourage_qubase,
    forgetful_fibration,
    kuratowski_closure,
    saturation_closure,
    symmetrization,
    t0_adjunction,
    t0_reflection,
)
from catalog.spaces import FinPreorder, FinTopSpace, default_labels
from engine.fincat import InputError
from engine.galois import syntop_of_qubase, topogenous_of_closure
from engine.lifting import Family
from engine.structures import discrete_qubase, discrete_syntop, identity_closure, indiscrete_closure
from store.bundle import Bundle


def point() -> FinTopSpace:
    return FinTopSpace(default_labels(1), frozenset({0, 1}), "pt")


def sierpinski_space() -> FinTopSpace:
    return FinTopSpace.sierpinski("S")


def three_point_space() -> FinTopSpace:
    """Opens ∅, {0,1}, X: points 0 and 1 are indistinguishable."""
    return FinTopSpace(default_labels(3), frozenset({0, 0b011, 0b111}), "X3")


def indiscrete_three() -> FinTopSpace:
    return FinTopSpace.indiscrete(3, "I3")


def arrow_preorder() -> FinPreorder:
    """Δ ∪ {(0,1)} on two points."""
    return FinPreorder.generated_by(default_labels(2), [(0, 1)], "R01")


# ---------------------------------------------------------------------------
# Bundles
# ---------------------------------------------------------------------------

def sierpinski_bundle() -> Bundle:
    sc = build_fintop_category([point(), sierpinski_space()])
    b = Bundle("sierpinski")
    b.add_spaces(sc)
    cl = kuratowski_closure(sc)
    base = entourage_qubase(sc)
    b.add_structure(cl)
    b.add_structure(replace(topogenous_of_closure(cl), id="cl-order"))
    b.add_structure(base)
    b.add_structure(replace(syntop_of_qubase(base), id="S_R"))
    return b


def ind3_bundle() -> Bundle:
    sc, p = t0_reflection([indiscrete_three()])
    b = Bundle("ind3")
    b.add_spaces(sc)
    b.add_transform(Family.POINTED, p)
    b.add_structure(kuratowski_closure(sc))
    return b


def t0_bundle() -> Bundle:
    sc, p = t0_reflection([three_point_space()])
    _, t0_sc, ad = t0_adjunction([three_point_space()])
    b = Bundle("t0")
    b.add_spaces(sc)
    b.add_spaces(t0_sc)
    b.add_transform(Family.POINTED, p)
    b.add_transform(Family.ADJOINT, ad)

    base = entourage_qubase(sc)
    b.add_structure(kuratowski_closure(sc))
    b.add_structure(base)
    b.add_structure(replace(syntop_of_qubase(base), id="S_R"))
    b.add_structure(replace(kuratowski_closure(t0_sc), id="cl0"))
    base0 = replace(entourage_qubase(t0_sc), id="U_R0")
    b.add_structure(base0)
    b.add_structure(replace(syntop_of_qubase(base0), id="S_R0"))
    return b


def sym_bundle() -> Bundle:
    pc, q = symmetrization([arrow_preorder(), FinPreorder.discrete(2, "D")])
    b = Bundle("sym")
    b.add_preorders(pc)
    b.add_transform(Family.COPOINTED, q)
    base = entourage_qubase(pc)
    b.add_structure(base)
    b.add_structure(replace(syntop_of_qubase(base), id="S_R"))
    b.add_structure(saturation_closure(pc))
    return b


def alexandrov_bundle() -> Bundle:
    sc, pc, ad = alexandrov_adjunction([sierpinski_space(), three_point_space()])
    b = Bundle("alexandrov")
    b.add_spaces(sc)
    b.add_preorders(pc)
    b.add_transform(Family.ADJOINT, ad)
    base = entourage_qubase(pc)
    b.add_structure(base)
    b.add_structure(replace(syntop_of_qubase(base), id="S_R"))
    b.add_structure(saturation_closure(pc))
    b.add_structure(kuratowski_closure(sc))
    return b


def forgetful_bundle() -> Bundle:
    spaces = [point(), sierpinski_space(), FinTopSpace.discrete(2, "D2"), FinTopSpace.indiscrete(2, "I2")]
    sc, sets, fd = forgetful_fibration(spaces)
    b = Bundle("forgetful")
    b.add_spaces(sc)
    b.add_transform(Family.FIBRATION, fd)
    b.add_structure(identity_closure(sets))
    b.add_structure(indiscrete_closure(sets))
    b.add_structure(replace(discrete_qubase(sets), id="discrete-base"))
    b.add_structure(replace(discrete_syntop(sets), id="discrete-order"))
    return b


BUNDLES: dict[str, Callable[[], Bundle]] = {
    "t0":         t0_bundle,
    "sym":        sym_bundle,
    "alexandrov": alexandrov_bundle,
    "forgetful":  forgetful_bundle,
    "sierpinski": sierpinski_bundle,
    "ind3":       ind3_bundle,
}


def bundle(name: str) -> Bundle:
    if name not in BUNDLES:
        raise InputError(f"unknown example {name!r}; choose from {sorted(BUNDLES)}")
    return BUNDLES[name]()
