"""
catalog/builders.py

Finite concrete categories of spaces, preorders and sets, the transformation
data relating them, and the structures they carry.

    build_fintop_category    continuous maps between finite spaces
    build_finqunif_category  R-preserving maps between finite preorders
    build_finset_category    all maps between finite sets

    t0_reflection            pointed endofunctor X -> X/~
    t0_adjunction            reflector -| inclusion of the T0 objects
    symmetrization           copointed endofunctor (X, R) -> (X, R ∩ R⁻¹)
    alexandrov_adjunction    specialization -| Alexandrov topology
    forgetful_fibration      finite spaces over finite sets

Objects are deduplicated structurally: two inputs with the same carrier and
the same opens (or rows) become one object, the first name winning.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

import numpy as np

from catalog.spaces import FinPreorder, FinTopSpace, default_labels
from config import MAX_HOM_SCAN
from engine.fincat import (
    AdjunctionData,
    CopointedEndo,
    FibrationData,
    FinCategory,
    FinMorphism,
    FinObject,
    FunctorData,
    InputError,
    NatTransData,
    PointedEndo,
    compose_functors,
    full_subcategory,
    identity_functor,
    image_table,
)
from engine.structures import ClosureOp, EndoMap, QUBase

P = TypeVar("P", FinTopSpace, FinPreorder)


@dataclass(frozen=True, eq=False)
class SpaceCategory:
    category: FinCategory
    spaces: Mapping[str, FinTopSpace]

    def space(self, x: str) -> FinTopSpace:
        self.category.obj(x)
        return self.spaces[x]


@dataclass(frozen=True, eq=False)
class PreorderCategory:
    category: FinCategory
    preorders: Mapping[str, FinPreorder]

    def preorder(self, x: str) -> FinPreorder:
        self.category.obj(x)
        return self.preorders[x]


# ---------------------------------------------------------------------------
# Categories
# ---------------------------------------------------------------------------

def _named(items: Iterable[P], prefix: str) -> dict[str, P]:
    """Structural dedupe, then ids from names (or prefix + position)."""
    out: dict[str, P] = {}
    seen: set = set()
    for i, item in enumerate(items):
        item.check()
        if item.key in seen:
            continue
        seen.add(item.key)
        oid = item.name or f"{prefix}{i}"
        if oid in out:
            raise InputError(f"two different objects named {oid!r}")
        out[oid] = item
    return out


def _scan_homs(cat_id: str, objects: Mapping[str, Sequence[str]],
               admits: Callable[[str, tuple[int, ...], str], bool]) -> FinCategory:
    """Every map table between the carriers that `admits` accepts."""
    morphisms: list[FinMorphism] = []
    for x, xs in objects.items():
        for y, ys in objects.items():
            if len(ys) ** len(xs) > MAX_HOM_SCAN:
                raise InputError(
                    f"hom({x}, {y}) has {len(ys) ** len(xs)} maps to scan, limit is {MAX_HOM_SCAN}"
                )
            k = 0
            for table in product(range(len(ys)), repeat=len(xs)):
                if not admits(x, table, y):
                    continue
                if x == y and table == tuple(range(len(xs))):
                    mid = f"1_{x}"
                else:
                    k += 1
                    mid = f"{x}->{y}#{k}"
                morphisms.append(FinMorphism(mid, x, y, table, len(ys)))
    objs = tuple(FinObject(oid, tuple(labels)) for oid, labels in objects.items())
    return FinCategory(cat_id, objs, tuple(morphisms))


def build_fintop_category(spaces: Iterable[FinTopSpace], cat_id: str = "FinTop") -> SpaceCategory:
    named = _named(spaces, "X")
    cat = _scan_homs(
        cat_id, {x: s.carrier for x, s in named.items()},
        lambda x, table, y: named[x].is_continuous(table, named[y]),
    )
    return SpaceCategory(cat, named)


def build_finqunif_category(preorders: Iterable[FinPreorder], cat_id: str = "FinQUnif") -> PreorderCategory:
    named = _named(preorders, "P")
    cat = _scan_homs(
        cat_id, {x: p.carrier for x, p in named.items()},
        lambda x, table, y: named[x].preserved_by(table, named[y]),
    )
    return PreorderCategory(cat, named)


def build_finset_category(carriers: Mapping[str, int] | Iterable[int], cat_id: str = "FinSet") -> FinCategory:
    if not isinstance(carriers, Mapping):
        carriers = {f"n{k}": k for k in dict.fromkeys(carriers)}
    return _scan_homs(
        cat_id, {x: default_labels(k) for x, k in carriers.items()},
        lambda x, table, y: True,
    )


def _find(cat: FinCategory, dom: str, cod: str, table: Sequence[int]) -> FinMorphism:
    f = cat.find(dom, cod, tuple(table))
    if f is None:
        raise InputError(f"{cat.id} has no morphism {dom} -> {cod} with table {tuple(table)}")
    return f


def _object_for(named: Mapping[str, P], item: P) -> str:
    for oid, other in named.items():
        if other.key == item.key:
            return oid
    raise InputError(f"no object with the structure of {item.name or item.carrier}")


# ---------------------------------------------------------------------------
# T0 reflection
# ---------------------------------------------------------------------------

def _with_quotients(spaces: Iterable[FinTopSpace]) -> list[FinTopSpace]:
    out = []
    for s in spaces:
        out.append(s)
        out.append(s.quotient()[0])
    return out


def _reflector(sc: SpaceCategory, target: FinCategory, fid: str) -> tuple[FunctorData, dict[str, FinMorphism]]:
    """X -> X/~ with its quotient maps, as a functor into `target`."""
    cat = sc.category
    quotient: dict[str, tuple[str, tuple[int, ...]]] = {}
    for x, s in sc.spaces.items():
        q, table = s.quotient()
        quotient[x] = (_object_for(sc.spaces, q), table)
    eta = {x: _find(cat, x, qx, table) for x, (qx, table) in quotient.items()}

    mor_map = {}
    for f in cat.morphisms:
        qx, tx = quotient[f.dom]
        qy, ty = quotient[f.cod]
        reps = {tx[i]: i for i in reversed(range(len(tx)))}
        table = tuple(ty[f.map[reps[k]]] for k in range(len(reps)))
        mor_map[f.id] = _find(target, qx, qy, table).id

    F = FunctorData(
        id=fid,
        source=cat,
        target=target,
        obj_map={x: qx for x, (qx, _) in quotient.items()},
        mor_map=mor_map,
        subobject_maps={x: tuple(int(v) for v in image_table(eta[x])) for x in cat.object_ids},
    )
    return F, eta


def t0_reflection(spaces: Iterable[FinTopSpace], cat_id: str = "FinTop") -> tuple[SpaceCategory, PointedEndo]:
    """The quotient by topological indistinguishability as a pointed endofunctor."""
    sc = build_fintop_category(_with_quotients(spaces), cat_id)
    cat = sc.category
    F, eta = _reflector(sc, cat, "T0")
    unit = NatTransData("eta", identity_functor(cat), F, {x: f.id for x, f in eta.items()})
    return sc, PointedEndo("T0", F, unit)


def t0_adjunction(spaces: Iterable[FinTopSpace], cat_id: str = "FinTop") -> tuple[SpaceCategory, SpaceCategory, AdjunctionData]:
    """The reflector into the T0 objects, left adjoint to the inclusion."""
    sc = build_fintop_category(_with_quotients(spaces), cat_id)
    cat = sc.category
    t0 = full_subcategory(cat, [x for x, s in sc.spaces.items() if s.is_t0], f"{cat_id}0")
    F, eta = _reflector(sc, t0, "T0r")
    G = FunctorData(
        id="incl",
        source=t0,
        target=cat,
        obj_map={y: y for y in t0.object_ids},
        mor_map={f.id: f.id for f in t0.morphisms},
    )
    unit = NatTransData("eta0", identity_functor(cat), compose_functors(G, F),
                        {x: f.id for x, f in eta.items()})
    counit = NatTransData("eps0", compose_functors(F, G), identity_functor(t0),
                          {y: t0.identity(y).id for y in t0.object_ids})
    t0_sc = SpaceCategory(t0, {y: sc.spaces[y] for y in t0.object_ids})
    return sc, t0_sc, AdjunctionData("T0-incl", F, G, unit, counit)


# ---------------------------------------------------------------------------
# Symmetrization
# ---------------------------------------------------------------------------

def symmetrization(preorders: Iterable[FinPreorder], cat_id: str = "FinQUnif") -> tuple[PreorderCategory, CopointedEndo]:
    """(X, R) -> (X, R ∩ R⁻¹) with identity carrier maps back to (X, R)."""
    items = []
    for p in preorders:
        items.append(p)
        items.append(p.symmetric_part())
    pc = build_finqunif_category(items, cat_id)
    cat = pc.category
    sym = {x: _object_for(pc.preorders, p.symmetric_part()) for x, p in pc.preorders.items()}

    G = FunctorData(
        id="Sym",
        source=cat,
        target=cat,
        obj_map=sym,
        mor_map={f.id: _find(cat, sym[f.dom], sym[f.cod], f.map).id for f in cat.morphisms},
    )
    counit = NatTransData(
        "eps", G, identity_functor(cat),
        {x: _find(cat, sym[x], x, tuple(range(cat.size(x)))).id for x in cat.object_ids},
    )
    return pc, CopointedEndo("Sym", G, counit)


# ---------------------------------------------------------------------------
# Alexandrov adjunction
# ---------------------------------------------------------------------------

def alexandrov_adjunction(spaces: Iterable[FinTopSpace]) -> tuple[SpaceCategory, PreorderCategory, AdjunctionData]:
    """
    F sends a space to its specialization preorder, G sends a preorder to
    its Alexandrov topology.  At finite scale both round trips are the
    identity, so unit and counit are identity carrier maps.
    """
    sc = build_fintop_category(spaces)
    pc = build_finqunif_category(sc.space(x).specialization() for x in sc.category.object_ids)
    A, C = sc.category, pc.category

    to_c = {x: _object_for(pc.preorders, sc.space(x).specialization()) for x in A.object_ids}
    to_a = {y: _object_for(sc.spaces, pc.preorder(y).alexandrov()) for y in C.object_ids}

    F = FunctorData("Spec", A, C, to_c,
                    {f.id: _find(C, to_c[f.dom], to_c[f.cod], f.map).id for f in A.morphisms})
    G = FunctorData("Alex", C, A, to_a,
                    {g.id: _find(A, to_a[g.dom], to_a[g.cod], g.map).id for g in C.morphisms})
    unit = NatTransData("eta", identity_functor(A), compose_functors(G, F),
                        {x: _find(A, x, to_a[to_c[x]], tuple(range(A.size(x)))).id for x in A.object_ids})
    counit = NatTransData("eps", compose_functors(F, G), identity_functor(C),
                          {y: _find(C, to_c[to_a[y]], y, tuple(range(C.size(y)))).id for y in C.object_ids})
    return sc, pc, AdjunctionData("Spec-Alex", F, G, unit, counit)


# ---------------------------------------------------------------------------
# Forgetful fibration
# ---------------------------------------------------------------------------

def _with_subspaces(spaces: Iterable[FinTopSpace]) -> list[FinTopSpace]:
    out = []
    for s in spaces:
        out.append(s)
        for keep in range(1, 1 << s.size):
            out.append(s.subspace(keep))
    return out


def forgetful_fibration(spaces: Iterable[FinTopSpace], with_subspaces: bool = True) -> tuple[SpaceCategory, FinCategory, FibrationData]:
    """
    The carrier functor from finite spaces to finite sets.  Subsets
    correspond identically upstairs and downstairs; the designated initial
    morphisms are the embeddings of subspaces.
    """
    spaces = list(spaces)
    sc = build_fintop_category(_with_subspaces(spaces) if with_subspaces else spaces)
    A = sc.category
    C = build_finset_category(A.obj(x).size for x in A.object_ids)
    to_c = {x: f"n{A.size(x)}" for x in A.object_ids}

    F = FunctorData("U", A, C, to_c, {f.id: _find(C, to_c[f.dom], to_c[f.cod], f.map).id for f in A.morphisms})
    ident = {x: tuple(range(1 << A.size(x))) for x in A.object_ids}

    initial = frozenset(
        f.id for f in A.morphisms
        if f.is_injective and sc.space(f.dom).opens == sc.space(f.dom).initial_opens(f.map, sc.space(f.cod))
    )
    return sc, C, FibrationData("U", F, ident, dict(ident), initial)


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------

def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def endomap_from_preorder(p: FinPreorder, obj: str = "") -> EndoMap:
    """U_R(A) = R[A]."""
    return EndoMap(obj or p.name, _freeze(p.image_table()))


def _rows_of(holder: SpaceCategory | PreorderCategory, x: str) -> FinPreorder:
    if isinstance(holder, SpaceCategory):
        return holder.space(x).specialization()
    return holder.preorder(x)


def kuratowski_closure(sc: SpaceCategory) -> ClosureOp:
    """c(A) = the smallest closed superset of A."""
    maps = {x: _freeze(sc.space(x).closure_table()) for x in sc.category.object_ids}
    return ClosureOp(sc.category, maps, "cl")


def saturation_closure(holder: SpaceCategory | PreorderCategory) -> ClosureOp:
    """c(A) = R[A], with R the specialization preorder for spaces."""
    maps = {x: _freeze(_rows_of(holder, x).image_table()) for x in holder.category.object_ids}
    return ClosureOp(holder.category, maps, "sat")


def entourage_qubase(holder: SpaceCategory | PreorderCategory) -> QUBase:
    """The principal base {U_R} on every object."""
    bases = {x: (endomap_from_preorder(_rows_of(holder, x), x),) for x in holder.category.object_ids}
    return QUBase(holder.category, bases, "U_R")
