"""
engine/galois.py

Translations between the structure kinds:

    closure  <->  meet-preserving topogenous order    c(m) = ⋀{p : m ⊏ p},  m ⊏ n iff c(m) ⊆ n
    base     <->  co-perfect syntopogenous structure  U(m) = ⋀{n : m ⊏ n},  m ⊏_U n iff U(m) ⊆ n
    idempotent closure  <->  singleton transitive base  <->  simple co-perfect structure

Inputs violating a precondition raise StructureError carrying the witness.
"""

from __future__ import annotations

import numpy as np

from engine.fincat import StructureError
from engine.reports import Report
from engine.structures import (
    ClosureOp,
    EndoMap,
    Order,
    QUBase,
    Structure,
    Syntop,
    TopogenousOrder,
    TopogenousRel,
    compare,
    coperfect_witness,
    endomap_of_relation,
    is_coperfect,
    is_idempotent,
    is_interpolative,
    is_meet_preserving,
    is_simple,
    is_transitive_base,
    relation_meet_preserving,
    relation_of_endomap,
    row_meets,
    same_union,
)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


def closure_of_topogenous(t: TopogenousOrder) -> ClosureOp:
    for x in t.category.object_ids:
        rel = t.at(x)
        if not relation_meet_preserving(rel):
            empty = np.nonzero(~rel.any(axis=1))[0]
            if empty.size:
                witness = {"object": x, "m": int(empty[0]), "problem": "no n with m ⊏ n"}
            else:
                meets = row_meets(rel)
                bad = int(np.nonzero(~rel[np.arange(rel.shape[0]), meets])[0][0])
                witness = {"object": x, "m": bad, "meet": int(meets[bad])}
            raise StructureError(
                f"topogenous order {t.id} is not meet-preserving; the closure formula does not invert",
                witness,
            )
    maps = {x: _freeze(row_meets(t.at(x))) for x in t.category.object_ids}
    return ClosureOp(t.category, maps, f"c[{t.id}]")


def topogenous_of_closure(c: ClosureOp) -> TopogenousOrder:
    rels = {x: _freeze(relation_of_endomap(c.at(x))) for x in c.category.object_ids}
    return TopogenousOrder(c.category, rels, f"⊏[{c.id}]")


def syntop_of_qubase(b: QUBase) -> Syntop:
    families = {
        x: tuple(TopogenousRel(x, _freeze(relation_of_endomap(u.table))) for u in b.at(x))
        for x in b.category.object_ids
    }
    return Syntop(b.category, families, f"S[{b.id}]")


def qubase_of_syntop(s: Syntop) -> QUBase:
    witness = coperfect_witness(s)
    if witness is not None:
        raise StructureError(f"syntopogenous structure {s.id} is not co-perfect", witness)
    bases = {
        x: tuple(EndoMap(x, _freeze(endomap_of_relation(r.matrix))) for r in s.at(x))
        for x in s.category.object_ids
    }
    return QUBase(s.category, bases, f"B[{s.id}]")


def _require_idempotent(c: ClosureOp) -> None:
    for x in c.category.object_ids:
        t = c.at(x)
        bad = np.nonzero(t[t] != t)[0]
        if bad.size:
            raise StructureError(
                f"closure {c.id} is not idempotent",
                {"object": x, "m": int(bad[0]), "c(m)": int(t[bad[0]]), "c(c(m))": int(t[t[bad[0]]])},
            )


def qubase_of_closure(c: ClosureOp) -> QUBase:
    """An idempotent closure as the transitive base {c_X}."""
    _require_idempotent(c)
    return QUBase(c.category, {x: (EndoMap(x, c.at(x)),) for x in c.category.object_ids}, f"B[{c.id}]")


def closure_of_qubase(b: QUBase) -> ClosureOp:
    """The pointwise-least member of each base, read as a closure."""
    maps = {}
    for x in b.category.object_ids:
        members = b.at(x)
        least = np.bitwise_and.reduce(np.stack([u.table for u in members]), axis=0)
        if not any(np.array_equal(least, u.table) for u in members):
            raise StructureError(f"base {b.id} has no least member at {x}", {"object": x})
        maps[x] = _freeze(least)
    c = ClosureOp(b.category, maps, f"c[{b.id}]")
    _require_idempotent(c)
    return c


def syntop_of_closure(c: ClosureOp) -> Syntop:
    """The simple co-perfect structure {⊏^c}."""
    return syntop_of_qubase(qubase_of_closure(c))


def closure_of_syntop(s: Syntop) -> ClosureOp:
    if not is_simple(s):
        raise StructureError(f"syntopogenous structure {s.id} is not simple",
                             {"sizes": {x: len(s.at(x)) for x in s.category.object_ids}})
    return closure_of_qubase(qubase_of_syntop(s))


# ---------------------------------------------------------------------------
# Round trips
# ---------------------------------------------------------------------------

def round_trip_report(s: Structure) -> Report:
    """Run every translation that applies to `s` and check it comes back unchanged."""
    rep = Report(f"correspondences for {s.kind} {s.id}")
    try:
        if isinstance(s, ClosureOp):
            t = topogenous_of_closure(s)
            rep.record("closure -> order is meet-preserving", is_meet_preserving(t), {"order": t.id})
            back = closure_of_topogenous(t)
            rep.record("closure -> order -> closure is the identity", back.key == s.key, {"closure": s.id})
            rep.record("idempotent iff interpolative", is_idempotent(s) == is_interpolative(t),
                       {"idempotent": is_idempotent(s), "interpolative": is_interpolative(t)})
            if is_idempotent(s):
                b = qubase_of_closure(s)
                rep.record("idempotent closure -> base is transitive", is_transitive_base(b), {"base": b.id})
                rep.record("closure -> simple structure -> closure is the identity",
                           closure_of_syntop(syntop_of_closure(s)).key == s.key, {"closure": s.id})
        elif isinstance(s, TopogenousOrder):
            if not is_meet_preserving(s):
                rep.note("order is not meet-preserving: no closure corresponds")
                return rep
            c = closure_of_topogenous(s)
            back = topogenous_of_closure(c)
            rep.record("order -> closure -> order is the identity", back.key == s.key, {"order": s.id})
            rep.record("interpolative iff idempotent", is_interpolative(s) == is_idempotent(c),
                       {"interpolative": is_interpolative(s), "idempotent": is_idempotent(c)})
        elif isinstance(s, QUBase):
            t = syntop_of_qubase(s)
            rep.record("base -> structure is co-perfect", is_coperfect(t), {"structure": t.id})
            back = qubase_of_syntop(t)
            verdict = compare(back, s)
            rep.record("base -> structure -> base generates the same filter", verdict == Order.EQUAL,
                       {"order": verdict})
            rep.record("base -> structure -> base -> structure keeps the union",
                       same_union(syntop_of_qubase(back), t), {"structure": t.id})
        else:
            if not is_coperfect(s):
                rep.note("structure is not co-perfect: no base corresponds")
                return rep
            b = qubase_of_syntop(s)
            rep.record("structure -> base -> structure keeps the union",
                       same_union(syntop_of_qubase(b), s), {"structure": s.id})
            rep.record("structure -> base -> structure is the same family",
                       compare(syntop_of_qubase(b), s) == Order.EQUAL, {"structure": s.id})
            if is_simple(s):
                c = closure_of_syntop(s)
                rep.record("simple structure -> closure -> structure keeps the union",
                           same_union(syntop_of_closure(c), s), {"closure": c.id})
    except StructureError as exc:
        rep.record("translation applies", False, {"problem": str(exc), **exc.witness})
    return rep
