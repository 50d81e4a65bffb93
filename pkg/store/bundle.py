"""
store/bundle.py

The in-memory form of an instance file: categories, functors, natural
transformations, the four kinds of transformation data, structures on the
categories, and the spaces / preorders the concrete categories were built
from.  Everything is keyed by id.

Functor references resolve two derived ids on the fly: "1:<category>" is the
identity functor and "G*F" is the composite G after F.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from catalog.builders import PreorderCategory, SpaceCategory
from catalog.spaces import FinPreorder, FinTopSpace
from engine.fincat import (
    AdjunctionData,
    CopointedEndo,
    FibrationData,
    FinCategory,
    FunctorData,
    InputError,
    NatTransData,
    PointedEndo,
    compose_functors,
    identity_functor,
    validate_adjunction,
    validate_category,
    validate_copointed,
    validate_fibration,
    validate_functor,
    validate_nat,
    validate_pointed,
)
from engine.lifting import Family, Transform
from engine.reports import Report
from engine.structures import Structure, validate


@dataclass
class Bundle:
    id: str = "bundle"
    categories: dict[str, FinCategory] = field(default_factory=dict)
    functors: dict[str, FunctorData] = field(default_factory=dict)
    nats: dict[str, NatTransData] = field(default_factory=dict)
    pointed: dict[str, PointedEndo] = field(default_factory=dict)
    copointed: dict[str, CopointedEndo] = field(default_factory=dict)
    fibrations: dict[str, FibrationData] = field(default_factory=dict)
    adjunctions: dict[str, AdjunctionData] = field(default_factory=dict)
    structures: dict[str, Structure] = field(default_factory=dict)
    spaces: dict[str, dict[str, FinTopSpace]] = field(default_factory=dict)
    preorders: dict[str, dict[str, FinPreorder]] = field(default_factory=dict)

    # -- adding -------------------------------------------------------------

    def add_category(self, cat: FinCategory) -> FinCategory:
        known = self.categories.get(cat.id)
        if known is not None and known is not cat and known != cat:
            raise InputError(f"two different categories with id {cat.id!r}")
        self.categories.setdefault(cat.id, cat)
        return self.categories[cat.id]

    def add_functor(self, F: FunctorData) -> None:
        self.add_category(F.source)
        self.add_category(F.target)
        if _derived(F.id):
            return
        known = self.functors.get(F.id)
        if known is not None and known is not F:
            raise InputError(f"two functors with id {F.id!r}")
        self.functors[F.id] = F

    def add_nat(self, eta: NatTransData) -> None:
        self.add_functor(eta.source)
        self.add_functor(eta.target)
        known = self.nats.get(eta.id)
        if known is not None and known is not eta:
            raise InputError(f"two natural transformations with id {eta.id!r}")
        self.nats[eta.id] = eta

    def add_transform(self, family: str, t: Transform) -> None:
        if family == Family.POINTED:
            self.add_functor(t.functor)
            self.add_nat(t.unit)
        elif family == Family.COPOINTED:
            self.add_functor(t.functor)
            self.add_nat(t.counit)
        elif family == Family.FIBRATION:
            self.add_functor(t.functor)
        else:
            self.add_functor(t.left)
            self.add_functor(t.right)
            self.add_nat(t.unit)
            if t.counit is not None:
                self.add_nat(t.counit)
        self.transforms(family)[t.id] = t

    def add_structure(self, s: Structure) -> None:
        self.add_category(s.category)
        if s.id in self.structures and self.structures[s.id] is not s:
            raise InputError(f"two structures with id {s.id!r}")
        self.structures[s.id] = s

    def add_spaces(self, sc: SpaceCategory) -> None:
        self.add_category(sc.category)
        self.spaces[sc.category.id] = dict(sc.spaces)

    def add_preorders(self, pc: PreorderCategory) -> None:
        self.add_category(pc.category)
        self.preorders[pc.category.id] = dict(pc.preorders)

    # -- lookup -------------------------------------------------------------

    def category(self, cid: str | None = None) -> FinCategory:
        if cid is None:
            if len(self.categories) != 1:
                raise InputError(f"bundle {self.id} has {len(self.categories)} categories; name one")
            return next(iter(self.categories.values()))
        try:
            return self.categories[cid]
        except KeyError:
            raise InputError(f"unknown category {cid!r}") from None

    def functor(self, ref: str) -> FunctorData:
        if ref in self.functors:
            return self.functors[ref]
        if ref.startswith("1:"):
            return identity_functor(self.category(ref[2:]))
        if "*" in ref:
            parts = [self.functor(p) for p in ref.split("*")]
            out = parts[-1]
            for g in reversed(parts[:-1]):
                out = compose_functors(g, out)
            return out
        raise InputError(f"unknown functor {ref!r}")

    def nat(self, ref: str) -> NatTransData:
        try:
            return self.nats[ref]
        except KeyError:
            raise InputError(f"unknown natural transformation {ref!r}") from None

    def structure(self, sid: str) -> Structure:
        try:
            return self.structures[sid]
        except KeyError:
            raise InputError(f"unknown structure {sid!r}; have {sorted(self.structures)}") from None

    def structures_of(self, kind: str, cid: str | None = None) -> list[Structure]:
        return [
            s for _, s in sorted(self.structures.items())
            if s.kind == kind and (cid is None or s.category.id == cid)
        ]

    def transforms(self, family: str) -> dict[str, Transform]:
        table = {
            Family.POINTED:   self.pointed,
            Family.COPOINTED: self.copointed,
            Family.FIBRATION: self.fibrations,
            Family.ADJOINT:   self.adjunctions,
        }
        try:
            return table[family]
        except KeyError:
            raise InputError(f"unknown lift family {family!r}") from None

    def transform(self, family: str, tid: str | None = None) -> Transform:
        known = self.transforms(family)
        if tid is None:
            if len(known) != 1:
                raise InputError(f"bundle {self.id} has {len(known)} {family} transforms; name one")
            return next(iter(known.values()))
        try:
            return known[tid]
        except KeyError:
            raise InputError(f"unknown {family} transform {tid!r}") from None

    def space_category(self, cid: str) -> SpaceCategory | None:
        if cid in self.spaces:
            return SpaceCategory(self.category(cid), self.spaces[cid])
        return None

    def preorder_category(self, cid: str) -> PreorderCategory | None:
        if cid in self.preorders:
            return PreorderCategory(self.category(cid), self.preorders[cid])
        return None


def _derived(fid: str) -> bool:
    return fid.startswith("1:") or "*" in fid


# ---------------------------------------------------------------------------
# Whole-bundle validation
# ---------------------------------------------------------------------------

def check_bundle(bundle: Bundle) -> tuple[Report, Report]:
    """
    Validate every item.  Returns (well-formedness, structures): the first
    covers categories, functors, transformations and transformation data,
    the second the structure axioms.
    """
    shape = Report(f"bundle {bundle.id}")
    for cid in sorted(bundle.categories):
        shape.extend(validate_category(bundle.categories[cid]), prefix=f"category {cid}")
    for fid in sorted(bundle.functors):
        shape.extend(validate_functor(bundle.functors[fid]), prefix=f"functor {fid}")
    for nid in sorted(bundle.nats):
        shape.extend(validate_nat(bundle.nats[nid]), prefix=f"nat {nid}")
    for name, items, check in (
        ("pointed", bundle.pointed, validate_pointed),
        ("copointed", bundle.copointed, validate_copointed),
        ("fibration", bundle.fibrations, validate_fibration),
        ("adjunction", bundle.adjunctions, validate_adjunction),
    ):
        for tid in sorted(items):
            shape.extend(check(items[tid]), prefix=f"{name} {tid}")
    for cid in sorted(bundle.spaces):
        for x, s in sorted(bundle.spaces[cid].items()):
            try:
                s.check()
                shape.record(f"space {cid}/{x}", True)
            except InputError as exc:
                shape.record(f"space {cid}/{x}", False, {"problem": str(exc)})
    for cid in sorted(bundle.preorders):
        for x, p in sorted(bundle.preorders[cid].items()):
            try:
                p.check()
                shape.record(f"preorder {cid}/{x}", True)
            except InputError as exc:
                shape.record(f"preorder {cid}/{x}", False, {"problem": str(exc)})

    axioms = Report(f"structures of {bundle.id}")
    for sid in sorted(bundle.structures):
        axioms.extend(validate(bundle.structures[sid]), prefix=f"{bundle.structures[sid].kind} {sid}")
    return shape, axioms
