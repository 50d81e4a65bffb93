"""
store/codec.py

JSON instance files <-> Bundle, and canonical dumping of reports.

Top-level keys (all optional):

    categories   [{id, objects: [{id, carrier}], morphisms: [{id, dom, cod, map}],
                   composition: [[g, f, g∘f], ...]}]
    objects / morphisms / composition / id
                 shorthand for a file holding a single category
    functors     [{id, source, target, objects: {x: y}, morphisms: {f: g},
                   subobjects: {x: [bitmask per subset]}, preserves_subobjects}]
    nats         [{id, source, target, components: {x: morphism}}]
    pointed      [{id, functor, unit}]
    copointed    [{id, functor, counit}]
    fibrations   [{id, functor, gamma: {x: [...]}, delta: {x: [...]}, initial: [...]}]
    adjunctions  [{id, left, right, unit, counit}]
    closures     [{id, category, maps: {x: [c(m) for m ascending]}}]
    topogenous   [{id, category, pairs: {x: [[m, n], ...]}}]
    qubases      [{id, category, bases: {x: [[U(m) for m ascending], ...]}}]
    syntops      [{id, category, relations: {rid: {object, pairs}}, families: {x: [rid, ...]}}]
    spaces       {category: {object: {carrier, opens}}}
    preorders    {category: {object: {carrier, rows}}}

Subsets are int bitmasks.  Dumps are canonical: sorted keys, objects and
morphisms in id order, subsets ascending.

Usage
-----
    from store.codec import load, dump
    bundle = load("t0.json")
    text = dump(bundle, "copy.json")
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from catalog.spaces import FinPreorder, FinTopSpace
from config import JSON_INDENT
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
)
from engine.lifting import Family
from engine.structures import (
    ClosureOp,
    Kind,
    QUBase,
    Structure,
    Syntop,
    TopogenousOrder,
    TopogenousRel,
    make_closure,
    make_qubase,
    make_syntop,
    make_topogenous,
    relation_from_pairs,
)
from store.bundle import Bundle


# ---------------------------------------------------------------------------
# Serialisation helpers
# ---------------------------------------------------------------------------

def _default_serial(obj):
    """JSON encoder for numpy values and sets."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "item"):          # numpy scalar
        return obj.item()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"Object of type {type(obj)} is not JSON serialisable")


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=JSON_INDENT, ensure_ascii=False,
                      default=_default_serial) + "\n"


def write(text: str, path: str | Path | None) -> None:
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")


def _need(d: dict, key: str, where: str) -> Any:
    try:
        return d[key]
    except (KeyError, TypeError):
        raise InputError(f"{where}: missing key {key!r}") from None


def _ints(values, where: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in values)
    except (TypeError, ValueError):
        raise InputError(f"{where}: expected a list of integers") from None


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def encode_category(cat: FinCategory) -> dict:
    return {
        "id": cat.id,
        "objects": [{"id": o.id, "carrier": list(o.carrier)} for o in sorted(cat.objects, key=lambda o: o.id)],
        "morphisms": [
            {"id": f.id, "dom": f.dom, "cod": f.cod, "map": list(f.map)}
            for f in sorted(cat.morphisms, key=lambda f: f.id)
        ],
        "composition": sorted([list(e) for e in cat.composition]),
    }


def encode_functor(F: FunctorData) -> dict:
    out = {
        "id": F.id,
        "source": F.source.id,
        "target": F.target.id,
        "objects": dict(F.obj_map),
        "morphisms": dict(F.mor_map),
        "preserves_subobjects": F.preserves_subobjects,
    }
    if F.subobject_maps:
        out["subobjects"] = {x: list(t) for x, t in F.subobject_maps.items()}
    return out


def encode_nat(eta: NatTransData) -> dict:
    return {"id": eta.id, "source": eta.source.id, "target": eta.target.id,
            "components": dict(eta.components)}


def encode_structure(s: Structure) -> dict:
    cat = s.category
    out = {"id": s.id, "category": cat.id}
    if isinstance(s, ClosureOp):
        out["maps"] = {x: s.at(x).tolist() for x in cat.object_ids}
    elif isinstance(s, TopogenousOrder):
        out["pairs"] = {x: TopogenousRel(x, s.at(x)).pairs() for x in cat.object_ids}
    elif isinstance(s, QUBase):
        out["bases"] = {x: [u.table.tolist() for u in s.at(x)] for x in cat.object_ids}
    else:
        relations, families = {}, {}
        for x in cat.object_ids:
            families[x] = []
            for k, r in enumerate(s.at(x)):
                rid = f"{x}.{k}"
                relations[rid] = {"object": x, "pairs": r.pairs()}
                families[x].append(rid)
        out["relations"] = relations
        out["families"] = families
    return out


_SECTION = {
    Kind.CLOSURE:    "closures",
    Kind.TOPOGENOUS: "topogenous",
    Kind.QUBASE:     "qubases",
    Kind.SYNTOP:     "syntops",
}


def to_dict(bundle: Bundle) -> dict:
    out: dict[str, Any] = {"id": bundle.id}
    out["categories"] = [encode_category(bundle.categories[c]) for c in sorted(bundle.categories)]
    if bundle.functors:
        out["functors"] = [encode_functor(bundle.functors[f]) for f in sorted(bundle.functors)]
    if bundle.nats:
        out["nats"] = [encode_nat(bundle.nats[n]) for n in sorted(bundle.nats)]
    if bundle.pointed:
        out["pointed"] = [
            {"id": p.id, "functor": p.functor.id, "unit": p.unit.id}
            for _, p in sorted(bundle.pointed.items())
        ]
    if bundle.copointed:
        out["copointed"] = [
            {"id": q.id, "functor": q.functor.id, "counit": q.counit.id}
            for _, q in sorted(bundle.copointed.items())
        ]
    if bundle.fibrations:
        out["fibrations"] = [
            {
                "id": fd.id,
                "functor": fd.functor.id,
                "gamma": {x: list(t) for x, t in fd.gamma.items()},
                "delta": {x: list(t) for x, t in fd.delta.items()},
                "initial": sorted(fd.initial),
            }
            for _, fd in sorted(bundle.fibrations.items())
        ]
    if bundle.adjunctions:
        out["adjunctions"] = [
            {
                "id": ad.id, "left": ad.left.id, "right": ad.right.id, "unit": ad.unit.id,
                **({"counit": ad.counit.id} if ad.counit is not None else {}),
            }
            for _, ad in sorted(bundle.adjunctions.items())
        ]
    for sid in sorted(bundle.structures):
        s = bundle.structures[sid]
        out.setdefault(_SECTION[s.kind], []).append(encode_structure(s))
    if bundle.spaces:
        out["spaces"] = {
            cid: {x: {"carrier": list(s.carrier), "opens": sorted(s.opens)} for x, s in spaces.items()}
            for cid, spaces in bundle.spaces.items()
        }
    if bundle.preorders:
        out["preorders"] = {
            cid: {x: {"carrier": list(p.carrier), "rows": list(p.rows)} for x, p in pre.items()}
            for cid, pre in bundle.preorders.items()
        }
    return out


def dump(bundle: Bundle, path: str | Path | None = None) -> str:
    text = dumps(to_dict(bundle))
    write(text, path)
    return text


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------

def decode_category(d: dict) -> FinCategory:
    cid = str(d.get("id", "C"))
    where = f"category {cid}"
    objects = []
    sizes = {}
    for o in _need(d, "objects", where):
        oid = str(_need(o, "id", where))
        carrier = tuple(str(c) for c in _need(o, "carrier", f"{where} object {oid}"))
        objects.append(FinObject(oid, carrier))
        sizes[oid] = len(carrier)
    morphisms = []
    for m in _need(d, "morphisms", where):
        mid = str(_need(m, "id", where))
        dom, cod = str(_need(m, "dom", mid)), str(_need(m, "cod", mid))
        if cod not in sizes or dom not in sizes:
            raise InputError(f"{where}: morphism {mid} refers to an unknown object")
        morphisms.append(FinMorphism(mid, dom, cod, _ints(_need(m, "map", mid), mid), sizes[cod]))
    composition = []
    entries = d.get("composition", [])
    if not isinstance(entries, list):
        raise InputError(f"{where}: composition must be a list of [g, f, g∘f] entries")
    for entry in entries:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise InputError(f"{where}: composition entries are [g, f, g∘f], got {entry}")
        composition.append(tuple(str(e) for e in entry))
    return FinCategory(cid, tuple(objects), tuple(morphisms), tuple(composition))


def _decode_structure(kind: str, d: dict, bundle: Bundle) -> Structure:
    sid = str(_need(d, "id", kind))
    cat = bundle.category(str(_need(d, "category", sid)))
    if kind == Kind.CLOSURE:
        return make_closure(cat, _need(d, "maps", sid), sid)
    if kind == Kind.TOPOGENOUS:
        pairs = _need(d, "pairs", sid)
        return make_topogenous(
            cat, {x: relation_from_pairs(cat.size(x), ps) for x, ps in pairs.items()}, sid
        )
    if kind == Kind.QUBASE:
        return make_qubase(cat, _need(d, "bases", sid), sid)
    relations = _need(d, "relations", sid)
    families = {}
    for x, rids in _need(d, "families", sid).items():
        members = []
        for rid in rids:
            rel = _need(relations, rid, f"{sid} relations")
            if str(_need(rel, "object", rid)) != x:
                raise InputError(f"{sid}: relation {rid} belongs to another object than {x}")
            members.append(relation_from_pairs(cat.size(x), _need(rel, "pairs", rid)))
        families[x] = members
    return make_syntop(cat, families, sid)


def from_dict(data: dict) -> Bundle:
    if not isinstance(data, dict):
        raise InputError("instance file must hold a JSON object")
    bundle = Bundle(str(data.get("id", "bundle")))

    for d in data.get("categories", []):
        bundle.add_category(decode_category(d))
    if "objects" in data:
        bundle.add_category(decode_category(data))

    for cid, spaces in data.get("spaces", {}).items():
        cat = bundle.category(cid)
        bundle.spaces[cid] = {
            x: FinTopSpace(tuple(_need(s, "carrier", x)), frozenset(_ints(_need(s, "opens", x), x)), x)
            for x, s in spaces.items() if cat.has_object(x)
        }
    for cid, pre in data.get("preorders", {}).items():
        cat = bundle.category(cid)
        bundle.preorders[cid] = {
            x: FinPreorder(tuple(_need(p, "carrier", x)), _ints(_need(p, "rows", x), x), x)
            for x, p in pre.items() if cat.has_object(x)
        }

    for d in data.get("functors", []):
        fid = str(_need(d, "id", "functor"))
        sub = d.get("subobjects")
        bundle.functors[fid] = FunctorData(
            id=fid,
            source=bundle.category(str(_need(d, "source", fid))),
            target=bundle.category(str(_need(d, "target", fid))),
            obj_map={str(k): str(v) for k, v in _need(d, "objects", fid).items()},
            mor_map={str(k): str(v) for k, v in _need(d, "morphisms", fid).items()},
            subobject_maps={str(x): _ints(t, fid) for x, t in sub.items()} if sub else None,
            preserves_subobjects=bool(d.get("preserves_subobjects", True)),
        )
    for d in data.get("nats", []):
        nid = str(_need(d, "id", "nat"))
        bundle.nats[nid] = NatTransData(
            nid,
            bundle.functor(str(_need(d, "source", nid))),
            bundle.functor(str(_need(d, "target", nid))),
            {str(k): str(v) for k, v in _need(d, "components", nid).items()},
        )

    for d in data.get("pointed", []):
        pid = str(_need(d, "id", "pointed"))
        bundle.add_transform(Family.POINTED, PointedEndo(
            pid, bundle.functor(str(_need(d, "functor", pid))), bundle.nat(str(_need(d, "unit", pid)))))
    for d in data.get("copointed", []):
        qid = str(_need(d, "id", "copointed"))
        bundle.add_transform(Family.COPOINTED, CopointedEndo(
            qid, bundle.functor(str(_need(d, "functor", qid))), bundle.nat(str(_need(d, "counit", qid)))))
    for d in data.get("fibrations", []):
        fid = str(_need(d, "id", "fibration"))
        bundle.add_transform(Family.FIBRATION, FibrationData(
            fid,
            bundle.functor(str(_need(d, "functor", fid))),
            {str(x): _ints(t, fid) for x, t in _need(d, "gamma", fid).items()},
            {str(x): _ints(t, fid) for x, t in _need(d, "delta", fid).items()},
            frozenset(str(m) for m in d.get("initial", [])),
        ))
    for d in data.get("adjunctions", []):
        aid = str(_need(d, "id", "adjunction"))
        counit = d.get("counit")
        bundle.add_transform(Family.ADJOINT, AdjunctionData(
            aid,
            bundle.functor(str(_need(d, "left", aid))),
            bundle.functor(str(_need(d, "right", aid))),
            bundle.nat(str(_need(d, "unit", aid))),
            bundle.nat(str(counit)) if counit is not None else None,
        ))

    for kind, section in _SECTION.items():
        for d in data.get(section, []):
            bundle.add_structure(_decode_structure(kind, d, bundle))
    return bundle


def loads(text: str) -> Bundle:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from None
    return from_dict(data)


def load(path: str | Path) -> Bundle:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return loads(text)


def structure_file(s: Structure) -> dict:
    """A one-structure instance file: its category plus the structure."""
    return {
        "id": s.id,
        "categories": [encode_category(s.category)],
        _SECTION[s.kind]: [encode_structure(s)],
    }
