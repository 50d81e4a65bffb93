"""
engine/structures.py

The four category-wide structure kinds and everything that reads them:

    ClosureOp        per object a table c_X : sub X -> sub X
    TopogenousOrder  per object a relation on sub X (bool matrix)
    QUBase           per object a finite base of inflationary monotone endomaps
    Syntop           per object a finite directed family of relations

Tables are numpy int64 arrays indexed by subset bitmask; relations are bool
matrices R[m, n] meaning m ⊏ n.  Validators scan every axiom instance and
return a Report, they do not raise on a violated law.

Usage
-----
    from engine.structures import make_closure, validate_closure, compare
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from engine.fincat import (
    FinCategory,
    FinMorphism,
    FunctorData,
    InputError,
    full_mask,
    image_table,
    preimage_table,
    require_table_cap,
)
from engine.reports import Report


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

class Kind:
    CLOSURE    = "closure"
    TOPOGENOUS = "topogenous"
    QUBASE     = "qubase"
    SYNTOP     = "syntop"


class Order:
    LESS         = "less"
    EQUAL        = "equal"
    GREATER      = "greater"
    INCOMPARABLE = "incomparable"


# ---------------------------------------------------------------------------
# Powerset helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def subset_index(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    idx.setflags(write=False)
    return idx


@lru_cache(maxsize=None)
def subset_matrix(n: int) -> np.ndarray:
    """SUB[a, b] is True iff a ⊆ b."""
    idx = subset_index(n)
    sub = (idx[:, None] & ~idx[None, :]) == 0
    sub.setflags(write=False)
    return sub


@lru_cache(maxsize=None)
def _int_subset_matrix(n: int) -> np.ndarray:
    m = subset_matrix(n).astype(np.int64)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def _lower_masks(n: int, bit: int) -> np.ndarray:
    idx = subset_index(n)
    out = idx[(idx >> bit) & 1 == 0]
    out.setflags(write=False)
    return out


def _freeze(values, dtype=np.int64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _n_of_table(length: int) -> int:
    n = length.bit_length() - 1
    if length < 1 or 1 << n != length:
        raise InputError(f"table length {length} is not a power of two")
    return n


def monotone_witness(table: np.ndarray, n: int) -> dict | None:
    """First covering pair m ⊂ m+{i} on which the table decreases, else None."""
    for i in range(n):
        lo = _lower_masks(n, i)
        bad = np.nonzero(table[lo] & ~table[lo | (1 << i)])[0]
        if bad.size:
            m = int(lo[bad[0]])
            return {"m": m, "m'": m | (1 << i)}
    return None


def inflation_witness(table: np.ndarray, n: int) -> dict | None:
    bad = np.nonzero(subset_index(n) & ~table)[0]
    return {"m": int(bad[0]), "U(m)": int(table[bad[0]])} if bad.size else None


def row_meets(rel: np.ndarray) -> np.ndarray:
    """For each m, the intersection of all n with m ⊏ n (the full set if none)."""
    n = _n_of_table(rel.shape[0])
    idx = subset_index(n)
    return np.bitwise_and.reduce(np.where(rel, idx[None, :], full_mask(n)), axis=1).astype(np.int64)


def saturate(rel: np.ndarray) -> np.ndarray:
    """Close a raw relation under m' ⊆ m ⊏ n ⊆ n' ⇒ m' ⊏ n'."""
    n = _n_of_table(rel.shape[0])
    sub = _int_subset_matrix(n)
    return (sub @ rel.astype(np.int64) @ sub) > 0


def relation_of_endomap(table: np.ndarray) -> np.ndarray:
    """m ⊏_U n  iff  U(m) ⊆ n."""
    n = _n_of_table(table.shape[0])
    return (table[:, None] & ~subset_index(n)[None, :]) == 0


def endomap_of_relation(rel: np.ndarray) -> np.ndarray:
    """U^⊏(m) = ⋀{n : m ⊏ n}."""
    return row_meets(rel)


def pull_relation(rel_y: np.ndarray, f: FinMorphism) -> np.ndarray:
    """m ⊏ n  iff  some p has f(m) ⊏_Y p and f⁻¹(p) ⊆ n."""
    img, pre = image_table(f), preimage_table(f)
    sub_x = _int_subset_matrix(f.dom_size)
    return (rel_y[img, :].astype(np.int64) @ sub_x[pre, :]) > 0


# ---------------------------------------------------------------------------
# Per-object pieces
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EndoMap:
    obj: str
    table: np.ndarray

    @property
    def key(self) -> bytes:
        return self.table.tobytes()

    def __call__(self, m: int) -> int:
        return int(self.table[m])

    def then(self, other: "EndoMap") -> "EndoMap":
        """other ∘ self."""
        return EndoMap(self.obj, _freeze(other.table[self.table]))

    def meet(self, other: "EndoMap") -> "EndoMap":
        return EndoMap(self.obj, _freeze(self.table & other.table))

    def leq(self, other: "EndoMap") -> bool:
        return not np.any(self.table & ~other.table)

    @property
    def is_idempotent(self) -> bool:
        return bool(np.array_equal(self.table[self.table], self.table))


@dataclass(frozen=True, eq=False)
class TopogenousRel:
    obj: str
    matrix: np.ndarray

    @property
    def key(self) -> bytes:
        return np.packbits(self.matrix).tobytes()

    def holds(self, m: int, n: int) -> bool:
        return bool(self.matrix[m, n])

    def pairs(self) -> list[tuple[int, int]]:
        ms, ns = np.nonzero(self.matrix)
        return [(int(a), int(b)) for a, b in zip(ms, ns)]


# ---------------------------------------------------------------------------
# Category-wide structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ClosureOp:
    category: FinCategory
    maps: Mapping[str, np.ndarray]
    id: str = "c"

    kind = Kind.CLOSURE

    def at(self, x: str) -> np.ndarray:
        try:
            return self.maps[x]
        except KeyError:
            raise InputError(f"closure {self.id} has no table for object {x!r}") from None

    @property
    def key(self) -> tuple:
        return tuple(self.at(x).tobytes() for x in self.category.object_ids)


@dataclass(frozen=True, eq=False)
class TopogenousOrder:
    category: FinCategory
    relations: Mapping[str, np.ndarray]
    id: str = "t"

    kind = Kind.TOPOGENOUS

    def at(self, x: str) -> np.ndarray:
        try:
            return self.relations[x]
        except KeyError:
            raise InputError(f"topogenous order {self.id} has no relation for object {x!r}") from None

    @property
    def key(self) -> tuple:
        return tuple(np.packbits(self.at(x)).tobytes() for x in self.category.object_ids)


@dataclass(frozen=True, eq=False)
class QUBase:
    category: FinCategory
    bases: Mapping[str, tuple[EndoMap, ...]]
    id: str = "b"

    kind = Kind.QUBASE

    def at(self, x: str) -> tuple[EndoMap, ...]:
        try:
            return self.bases[x]
        except KeyError:
            raise InputError(f"base {self.id} has no members for object {x!r}") from None

    @property
    def key(self) -> tuple:
        return tuple(tuple(sorted(u.key for u in self.at(x))) for x in self.category.object_ids)


@dataclass(frozen=True, eq=False)
class Syntop:
    category: FinCategory
    families: Mapping[str, tuple[TopogenousRel, ...]]
    id: str = "s"

    kind = Kind.SYNTOP

    def at(self, x: str) -> tuple[TopogenousRel, ...]:
        try:
            return self.families[x]
        except KeyError:
            raise InputError(f"syntopogenous structure {self.id} has no family for object {x!r}") from None

    def union(self, x: str) -> np.ndarray:
        members = self.at(x)
        n = self.category.size(x)
        out = np.zeros((1 << n, 1 << n), dtype=bool)
        for r in members:
            out |= r.matrix
        return out

    @property
    def key(self) -> tuple:
        return tuple(tuple(sorted(r.key for r in self.at(x))) for x in self.category.object_ids)


Structure = Union[ClosureOp, TopogenousOrder, QUBase, Syntop]


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def _table_for(cat: FinCategory, x: str, values, what: str) -> np.ndarray:
    n = cat.size(x)
    require_table_cap(n, what)
    arr = _freeze(values)
    if arr.shape != (1 << n,):
        raise InputError(f"{what}: table at {x} has {arr.size} entries, expected {1 << n}")
    return arr


def _matrix_for(cat: FinCategory, x: str, values, what: str) -> np.ndarray:
    n = cat.size(x)
    require_table_cap(n, what)
    arr = np.array(values, dtype=bool)
    if arr.shape != (1 << n, 1 << n):
        raise InputError(f"{what}: relation at {x} has shape {arr.shape}, expected {(1 << n, 1 << n)}")
    arr.setflags(write=False)
    return arr


def _require_all(cat: FinCategory, given: Iterable[str], what: str) -> None:
    missing = [x for x in cat.object_ids if x not in set(given)]
    if missing:
        raise InputError(f"{what} is missing objects: {missing}")
    extra = [x for x in given if not cat.has_object(x)]
    if extra:
        raise InputError(f"{what} names unknown objects: {extra}")


def make_closure(cat: FinCategory, maps: Mapping[str, Sequence[int]], id: str = "c") -> ClosureOp:
    _require_all(cat, maps, f"closure {id}")
    return ClosureOp(cat, {x: _table_for(cat, x, maps[x], f"closure {id}") for x in cat.object_ids}, id)


def make_topogenous(cat: FinCategory, relations: Mapping[str, np.ndarray], id: str = "t") -> TopogenousOrder:
    _require_all(cat, relations, f"topogenous order {id}")
    return TopogenousOrder(
        cat, {x: _matrix_for(cat, x, relations[x], f"topogenous order {id}") for x in cat.object_ids}, id
    )


def relation_from_pairs(n: int, pairs: Iterable[Sequence[int]]) -> np.ndarray:
    rel = np.zeros((1 << n, 1 << n), dtype=bool)
    for m, q in pairs:
        if m < 0 or q < 0 or m >> n or q >> n:
            raise InputError(f"pair ({m}, {q}) does not fit a {n}-element carrier")
        rel[m, q] = True
    return rel


def make_qubase(cat: FinCategory, bases: Mapping[str, Sequence[Sequence[int]]], id: str = "b") -> QUBase:
    _require_all(cat, bases, f"base {id}")
    out = {}
    for x in cat.object_ids:
        out[x] = tuple(EndoMap(x, _table_for(cat, x, t, f"base {id}")) for t in bases[x])
    return QUBase(cat, out, id)


def make_syntop(cat: FinCategory, families: Mapping[str, Sequence[np.ndarray]], id: str = "s") -> Syntop:
    _require_all(cat, families, f"syntopogenous structure {id}")
    out = {}
    for x in cat.object_ids:
        out[x] = tuple(TopogenousRel(x, _matrix_for(cat, x, r, f"syntop {id}")) for r in families[x])
    return Syntop(cat, out, id)


def identity_closure(cat: FinCategory) -> ClosureOp:
    return ClosureOp(cat, {x: subset_index(cat.size(x)) for x in cat.object_ids}, "identity")


def top_closure(cat: FinCategory) -> ClosureOp:
    """c(m) = X for every m."""
    maps = {x: _freeze(np.full(1 << cat.size(x), full_mask(cat.size(x)))) for x in cat.object_ids}
    return ClosureOp(cat, maps, "top")


def indiscrete_closure(cat: FinCategory) -> ClosureOp:
    """c(∅) = ∅ and c(m) = X otherwise."""
    maps = {}
    for x in cat.object_ids:
        n = cat.size(x)
        t = np.full(1 << n, full_mask(n), dtype=np.int64)
        t[0] = 0
        maps[x] = _freeze(t)
    return ClosureOp(cat, maps, "indiscrete")


def discrete_topogenous(cat: FinCategory) -> TopogenousOrder:
    """m ⊏ n iff m ⊆ n."""
    return TopogenousOrder(cat, {x: subset_matrix(cat.size(x)) for x in cat.object_ids}, "discrete")


def discrete_qubase(cat: FinCategory) -> QUBase:
    return QUBase(cat, {x: (EndoMap(x, subset_index(cat.size(x))),) for x in cat.object_ids}, "discrete")


def discrete_syntop(cat: FinCategory) -> Syntop:
    return Syntop(cat, {x: (TopogenousRel(x, subset_matrix(cat.size(x))),) for x in cat.object_ids}, "discrete")


def closure_qubase(c: ClosureOp) -> QUBase:
    """The singleton base {c_X}; a quasi-uniformity whenever c is idempotent."""
    return QUBase(c.category, {x: (EndoMap(x, c.at(x)),) for x in c.category.object_ids}, f"{c.id}:base")


# ---------------------------------------------------------------------------
# Validators
# ---------------------------------------------------------------------------

def _check_table_cover(cat: FinCategory, given: Mapping, what: str) -> None:
    missing = [x for x in cat.object_ids if x not in given]
    if missing:
        raise InputError(f"{what} has no rows for objects {missing}")


def _range_witness(table: np.ndarray, n: int) -> dict | None:
    bad = np.nonzero((table < 0) | (table >> n != 0))[0]
    return {"m": int(bad[0]), "value": int(table[bad[0]])} if bad.size else None


def validate_closure(c: ClosureOp) -> Report:
    cat = c.category
    _check_table_cover(cat, c.maps, f"closure {c.id}")
    rep = Report(f"closure operator {c.id} on {cat.id}")

    w = None
    for x in cat.object_ids:
        r = _range_witness(c.at(x), cat.size(x))
        if r:
            w = {"object": x, **r}
            break
    rep.record("entries are subsets", w is None, w)
    if w:
        return rep

    w = None
    for x in cat.object_ids:
        r = inflation_witness(c.at(x), cat.size(x))
        if r:
            w = {"object": x, **r}
            break
    rep.record("C1 extensive: m <= c(m)", w is None, w)

    w = None
    for x in cat.object_ids:
        r = monotone_witness(c.at(x), cat.size(x))
        if r:
            w = {"object": x, **r}
            break
    rep.record("C2 monotone", w is None, w)

    w = None
    for f in cat.morphisms:
        img = image_table(f)
        bad = np.nonzero(img[c.at(f.dom)] & ~c.at(f.cod)[img])[0]
        if bad.size:
            m = int(bad[0])
            w = {"morphism": f.id, "m": m, "f(c(m))": int(img[c.at(f.dom)[m]]),
                 "c(f(m))": int(c.at(f.cod)[img[m]])}
            break
    rep.record("C3 every morphism c-continuous", w is None, w)
    return rep


def _relation_axioms(rel: np.ndarray, n: int) -> tuple[dict | None, dict | None]:
    sub = subset_matrix(n)
    bad = np.argwhere(rel & ~sub)
    t1 = {"m": int(bad[0][0]), "n": int(bad[0][1])} if bad.size else None
    bad = np.argwhere(saturate(rel) & ~rel)
    t2 = {"m'": int(bad[0][0]), "n'": int(bad[0][1])} if bad.size else None
    return t1, t2


def _t3_witness(cat: FinCategory, rel_of) -> dict | None:
    for f in cat.morphisms:
        pre = preimage_table(f)
        bad = np.argwhere(rel_of(f.cod) & ~rel_of(f.dom)[np.ix_(pre, pre)])
        if bad.size:
            m, n = int(bad[0][0]), int(bad[0][1])
            return {"morphism": f.id, "m": m, "n": n, "f^-1(m)": int(pre[m]), "f^-1(n)": int(pre[n])}
    return None


def validate_topogenous(t: TopogenousOrder) -> Report:
    cat = t.category
    _check_table_cover(cat, t.relations, f"topogenous order {t.id}")
    rep = Report(f"topogenous order {t.id} on {cat.id}")
    w1 = w2 = None
    for x in cat.object_ids:
        t1, t2 = _relation_axioms(t.at(x), cat.size(x))
        if t1 and w1 is None:
            w1 = {"object": x, **t1}
        if t2 and w2 is None:
            w2 = {"object": x, **t2}
    rep.record("T1 m ⊏ n implies m <= n", w1 is None, w1)
    rep.record("T2 stable under shrinking m and growing n", w2 is None, w2)
    w = _t3_witness(cat, t.at)
    rep.record("T3 every morphism ⊏-continuous", w is None, w)
    return rep


def validate_qubase(b: QUBase) -> Report:
    cat = b.category
    _check_table_cover(cat, b.bases, f"base {b.id}")
    rep = Report(f"quasi-uniformity base {b.id} on {cat.id}")

    empty = next((x for x in cat.object_ids if not b.at(x)), None)
    rep.record("every object has a base element", empty is None, {"object": empty})
    if empty is not None:
        return rep

    w = None
    for x in cat.object_ids:
        n = cat.size(x)
        for k, u in enumerate(b.at(x)):
            r = _range_witness(u.table, n) or inflation_witness(u.table, n)
            if r is None:
                r = monotone_witness(u.table, n)
                if r:
                    r = {"problem": "not monotone", **r}
            if r:
                w = {"object": x, "element": k, **r}
                break
        if w:
            break
    rep.record("U1 members inflationary monotone endomaps", w is None, w)
    if w:
        return rep

    w = None
    for x in cat.object_ids:
        members = b.at(x)
        for k, u in enumerate(members):
            if not any(v.then(v).leq(u) for v in members):
                w = {"object": x, "element": k}
                break
        if w:
            break
    rep.record("U2 square refinement: some U' with U'∘U' <= U", w is None, w)

    w = None
    for x in cat.object_ids:
        members = b.at(x)
        for i, u in enumerate(members):
            for j in range(i + 1, len(members)):
                meet = u.meet(members[j])
                if not any(v.leq(meet) for v in members):
                    w = {"object": x, "elements": [i, j]}
                    break
            if w:
                break
        if w:
            break
    rep.record("U4 some member below each pairwise meet", w is None, w)

    w = None
    for f in cat.morphisms:
        img = image_table(f)
        for k, v in enumerate(b.at(f.cod)):
            target = v.table[img]
            if not any(not np.any(img[u.table] & ~target) for u in b.at(f.dom)):
                w = {"morphism": f.id, "element": k}
                break
        if w:
            break
    rep.record("U5 every morphism compatible: f(U'(m)) <= U(f(m))", w is None, w)
    return rep


def validate_syntop(s: Syntop) -> Report:
    cat = s.category
    _check_table_cover(cat, s.families, f"syntopogenous structure {s.id}")
    rep = Report(f"syntopogenous structure {s.id} on {cat.id}")

    empty = next((x for x in cat.object_ids if not s.at(x)), None)
    rep.record("every object has a member", empty is None, {"object": empty})
    if empty is not None:
        return rep

    w = None
    for x in cat.object_ids:
        for k, r in enumerate(s.at(x)):
            t1, t2 = _relation_axioms(r.matrix, cat.size(x))
            if t1 or t2:
                w = {"object": x, "member": k, **(t1 or {}), **(t2 or {})}
                break
        if w:
            break
    rep.record("S1 members satisfy T1 and T2", w is None, w)

    w = None
    for x in cat.object_ids:
        members = s.at(x)
        for i, r in enumerate(members):
            for j in range(i + 1, len(members)):
                joined = r.matrix | members[j].matrix
                if not any(not np.any(joined & ~q.matrix) for q in members):
                    w = {"object": x, "members": [i, j]}
                    break
            if w:
                break
        if w:
            break
    rep.record("S2 directed under inclusion", w is None, w)

    w = _t3_witness(cat, s.union)
    rep.record("S3 union satisfies T3", w is None, w)
    w = None
    for x in cat.object_ids:
        u = s.union(x)
        bad = np.argwhere(u & ~_compose_rel(u, u))
        if bad.size:
            w = {"object": x, "m": int(bad[0][0]), "n": int(bad[0][1])}
            break
    rep.record("S3 union interpolative", w is None, w)
    return rep


def validate(structure: Structure) -> Report:
    if isinstance(structure, ClosureOp):
        return validate_closure(structure)
    if isinstance(structure, TopogenousOrder):
        return validate_topogenous(structure)
    if isinstance(structure, QUBase):
        return validate_qubase(structure)
    if isinstance(structure, Syntop):
        return validate_syntop(structure)
    raise InputError(f"not a structure: {type(structure).__name__}")


# ---------------------------------------------------------------------------
# Orderings
# ---------------------------------------------------------------------------

def _same_kind(a: Structure, b: Structure) -> None:
    if type(a) is not type(b):
        raise InputError(f"cannot compare {a.kind} {a.id} with {b.kind} {b.id}")
    if a.category.id != b.category.id:
        raise InputError(f"{a.id} and {b.id} live on different categories")


def leq(a: Structure, b: Structure) -> bool:
    """a <= b in the order of their kind."""
    _same_kind(a, b)
    xs = a.category.object_ids
    if isinstance(a, ClosureOp):
        return all(not np.any(a.at(x) & ~b.at(x)) for x in xs)
    if isinstance(a, TopogenousOrder):
        return all(not np.any(a.at(x) & ~b.at(x)) for x in xs)
    if isinstance(a, QUBase):
        # every U in a is dominated from below by some V in b
        return all(any(v.leq(u) for v in b.at(x)) for x in xs for u in a.at(x))
    return all(
        any(not np.any(r.matrix & ~q.matrix) for q in b.at(x))
        for x in xs for r in a.at(x)
    )


def compare(a: Structure, b: Structure) -> str:
    lo, hi = leq(a, b), leq(b, a)
    if lo and hi:
        return Order.EQUAL
    if lo:
        return Order.LESS
    if hi:
        return Order.GREATER
    return Order.INCOMPARABLE


def same_union(a: Syntop, b: Syntop) -> bool:
    _same_kind(a, b)
    return all(np.array_equal(a.union(x), b.union(x)) for x in a.category.object_ids)


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------

def _compose_rel(r: np.ndarray, s: np.ndarray) -> np.ndarray:
    """m (r;s) n iff some p has m r p and p s n."""
    return (r.astype(np.int64) @ s.astype(np.int64)) > 0


def is_idempotent(c: ClosureOp) -> bool:
    return all(np.array_equal(c.at(x)[c.at(x)], c.at(x)) for x in c.category.object_ids)


def relation_meet_preserving(rel: np.ndarray) -> bool:
    """Every row is nonempty and contains its own meet (T2 assumed)."""
    if not rel.any(axis=1).all():
        return False
    meets = row_meets(rel)
    return bool(rel[np.arange(rel.shape[0]), meets].all())


def relation_interpolative(rel: np.ndarray) -> bool:
    return not np.any(rel & ~_compose_rel(rel, rel))


def is_meet_preserving(t: TopogenousOrder) -> bool:
    return all(relation_meet_preserving(t.at(x)) for x in t.category.object_ids)


def is_interpolative(t: TopogenousOrder | Syntop) -> bool:
    """For a syntopogenous structure: every member interpolative."""
    if isinstance(t, Syntop):
        return all(relation_interpolative(r.matrix) for x in t.category.object_ids for r in t.at(x))
    return all(relation_interpolative(t.at(x)) for x in t.category.object_ids)


def is_coperfect(s: Syntop) -> bool:
    return all(relation_meet_preserving(r.matrix) for x in s.category.object_ids for r in s.at(x))


def is_simple(s: Syntop) -> bool:
    return all(len({r.key for r in s.at(x)}) == 1 for x in s.category.object_ids)


def is_transitive_base(b: QUBase) -> bool:
    return all(u.is_idempotent for x in b.category.object_ids for u in b.at(x))


def coperfect_witness(s: Syntop) -> dict | None:
    for x in s.category.object_ids:
        for k, r in enumerate(s.at(x)):
            if not relation_meet_preserving(r.matrix):
                empty = np.nonzero(~r.matrix.any(axis=1))[0]
                if empty.size:
                    return {"object": x, "member": k, "m": int(empty[0]), "problem": "no n with m ⊏ n"}
                meets = row_meets(r.matrix)
                bad = np.nonzero(~r.matrix[np.arange(r.matrix.shape[0]), meets])[0]
                return {"object": x, "member": k, "m": int(bad[0]), "meet": int(meets[bad[0]])}
    return None


# ---------------------------------------------------------------------------
# Continuity
# ---------------------------------------------------------------------------

def _relation_continuous(f: FinMorphism, rel_x: np.ndarray, rel_y: np.ndarray) -> bool:
    """f(m) ⊏_Y n  ⇒  m ⊏_X f⁻¹(n)."""
    img, pre = image_table(f), preimage_table(f)
    return not np.any(rel_y[img, :] & ~rel_x[:, pre])


def morphism_continuity(f: FinMorphism, a: Structure, b: Structure) -> bool:
    """(a, b)-continuity of f: X -> Y, with a read at X and b at Y."""
    if type(a) is not type(b):
        raise InputError(f"continuity needs two structures of one kind, got {a.kind} and {b.kind}")
    x, y = f.dom, f.cod
    if isinstance(a, ClosureOp):
        img = image_table(f)
        return not np.any(img[a.at(x)] & ~b.at(y)[img])
    if isinstance(a, TopogenousOrder):
        return _relation_continuous(f, a.at(x), b.at(y))
    if isinstance(a, QUBase):
        img = image_table(f)
        return all(
            any(not np.any(img[u.table] & ~v.table[img]) for u in a.at(x))
            for v in b.at(y)
        )
    return all(
        any(_relation_continuous(f, r.matrix, q.matrix) for r in a.at(x))
        for q in b.at(y)
    )


def functor_continuity(F: FunctorData, a: Structure, b: Structure) -> bool:
    """(a, b)-continuity of F: A -> C, with a on A and b on C."""
    if type(a) is not type(b):
        raise InputError(f"continuity needs two structures of one kind, got {a.kind} and {b.kind}")
    if a.category.id != F.source.id or b.category.id != F.target.id:
        raise InputError(f"functor {F.id} does not run from {a.category.id} to {b.category.id}")
    for x in F.source.object_ids:
        fx = F.on_obj(x)
        fsub = F.subset_table(x)
        if isinstance(a, ClosureOp):
            if np.any(fsub[a.at(x)] & ~b.at(fx)[fsub]):
                return False
        elif isinstance(a, TopogenousOrder):
            if np.any(b.at(fx)[np.ix_(fsub, fsub)] & ~a.at(x)):
                return False
        elif isinstance(a, QUBase):
            if not all(
                any(not np.any(fsub[u.table] & ~v.table[fsub]) for u in a.at(x))
                for v in b.at(fx)
            ):
                return False
        elif is_coperfect(a) and is_coperfect(b):
            us = [endomap_of_relation(r.matrix) for r in a.at(x)]
            vs = [endomap_of_relation(q.matrix) for q in b.at(fx)]
            if not all(any(not np.any(fsub[u] & ~v[fsub]) for u in us) for v in vs):
                return False
        else:
            if not all(
                any(not np.any(q.matrix[np.ix_(fsub, fsub)] & ~r.matrix) for r in a.at(x))
                for q in b.at(fx)
            ):
                return False
    return True


def is_initial(f: FinMorphism, s: QUBase | Syntop) -> bool:
    """The structure at dom f is no finer than the one pulled back along f."""
    x, y = f.dom, f.cod
    if isinstance(s, QUBase):
        img, pre = image_table(f), preimage_table(f)
        return all(
            any(not np.any(pre[v.table[img]] & ~u.table) for v in s.at(y))
            for u in s.at(x)
        )
    if isinstance(s, Syntop):
        pulled = [pull_relation(q.matrix, f) for q in s.at(y)]
        return all(any(not np.any(r.matrix & ~p) for p in pulled) for r in s.at(x))
    raise InputError(f"initiality is defined for bases and syntopogenous structures, not {s.kind}")
