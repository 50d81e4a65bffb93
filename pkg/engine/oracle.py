"""
engine/oracle.py

Brute-force side of the lab.

  * exhaustive enumerators of closures, topogenous orders and quasi-uniformity
    bases on micro categories (carrier <= ENUM_CARRIER, or FORCED_ENUM_CARRIER
    with force=True)
  * seeded adversarial candidates for anything larger
  * certify_extremal: scans candidates and checks that every continuous one
    sits on the claimed side of a lifted structure
  * principality_check: the least member of a finite base is idempotent and
    generates the whole filter

Enumeration is per object first (cached by carrier size), then a backtracking
pass over the objects in category order that checks every morphism as soon as
both of its ends are assigned.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from config import DEFAULT_CANDIDATES, DEFAULT_SEED, ENUM_CARRIER, FORCED_ENUM_CARRIER
from engine.fincat import FinCategory, FinMorphism, InputError, bits, full_mask, image_table, popcount, preimage_table
from engine.galois import syntop_of_qubase, topogenous_of_closure
from engine.reports import Certificate, Report
from engine.structures import (
    ClosureOp,
    EndoMap,
    Kind,
    Order,
    QUBase,
    Structure,
    Syntop,
    TopogenousOrder,
    TopogenousRel,
    compare,
    is_coperfect,
    relation_interpolative,
    relation_meet_preserving,
    row_meets,
    saturate,
    subset_index,
    subset_matrix,
    validate,
)


class Mode:
    EXHAUSTIVE  = "exhaustive"
    ADVERSARIAL = "adversarial"


class Direction:
    COARSEST = "coarsest"       # lifted <= candidate
    FINEST   = "finest"         # candidate <= lifted
    LARGEST  = "largest"        # candidate <= lifted (closures, pointwise)
    LEAST    = "least"          # lifted <= candidate (closures, pointwise)

    ALL = (COARSEST, FINEST, LARGEST, LEAST)


_LIFTED_BELOW = {Direction.COARSEST, Direction.LEAST}


# ---------------------------------------------------------------------------
# Caps
# ---------------------------------------------------------------------------

def enumeration_limit(cap: int | None = None, force: bool = False) -> int:
    limit = ENUM_CARRIER if cap is None else cap
    if limit > FORCED_ENUM_CARRIER:
        raise InputError(f"exhaustive enumeration is capped at carrier {FORCED_ENUM_CARRIER}, asked for {limit}")
    if limit > ENUM_CARRIER and not force:
        raise InputError(f"enumeration at carrier {limit} needs force (default cap {ENUM_CARRIER})")
    return limit


def _require_enumerable(cat: FinCategory, cap: int | None, force: bool) -> None:
    limit = enumeration_limit(cap, force)
    if cat.max_carrier > limit:
        raise InputError(
            f"category {cat.id} has a carrier of size {cat.max_carrier}, above the enumeration cap {limit}"
        )


# ---------------------------------------------------------------------------
# Per-object tables
# ---------------------------------------------------------------------------

def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def extensive_monotone_tables(n: int) -> tuple[np.ndarray, ...]:
    """Every inflationary monotone self-map of the powerset of an n-set."""
    size, full = 1 << n, full_mask(n)
    table = [0] * size
    out: list[np.ndarray] = []

    def fill(m: int) -> None:
        if m == size:
            out.append(_frozen(table))
            return
        lower = m
        for i in bits(m):
            lower |= table[m ^ (1 << i)]
        free = full & ~lower
        extra = free
        while True:
            table[m] = lower | extra
            fill(m + 1)
            if extra == 0:
                break
            extra = (extra - 1) & free

    fill(0)
    return tuple(out)


@lru_cache(maxsize=None)
def idempotent_tables(n: int) -> tuple[np.ndarray, ...]:
    return tuple(t for t in extensive_monotone_tables(n) if np.array_equal(t[t], t))


@lru_cache(maxsize=None)
def topogenous_relations(n: int) -> tuple[np.ndarray, ...]:
    """Every relation on the powerset of an n-set satisfying T1 and T2."""
    size = 1 << n
    pairs = [(m, q) for m in range(size) for q in range(size) if m & ~q == 0]
    pairs.sort(key=lambda p: (popcount(p[0]), -popcount(p[1]), p))
    # immediate pairs forced by (m, q): drop one element of m, or add one to q
    forced = {
        (m, q): [(m ^ (1 << i), q) for i in bits(m)]
                + [(m, q | (1 << i)) for i in range(n) if not q >> i & 1]
        for m, q in pairs
    }
    chosen: set[tuple[int, int]] = set()
    out: list[np.ndarray] = []

    def walk(k: int) -> None:
        if k == len(pairs):
            rel = np.zeros((size, size), dtype=bool)
            for m, q in chosen:
                rel[m, q] = True
            rel.setflags(write=False)
            out.append(rel)
            return
        walk(k + 1)
        pair = pairs[k]
        if all(p in chosen for p in forced[pair]):
            chosen.add(pair)
            walk(k + 1)
            chosen.discard(pair)

    walk(0)
    return tuple(out)


# ---------------------------------------------------------------------------
# Category-level backtracking
# ---------------------------------------------------------------------------

def _assign(cat: FinCategory, options: dict[str, Sequence],
            compatible: Callable[[FinMorphism, object, object], bool]) -> Iterator[dict]:
    order = cat.object_ids
    pos = {x: i for i, x in enumerate(order)}
    due: list[list[FinMorphism]] = [[] for _ in order]
    for f in cat.morphisms:
        due[max(pos[f.dom], pos[f.cod])].append(f)
    chosen: dict = {}

    def walk(k: int) -> Iterator[dict]:
        if k == len(order):
            yield dict(chosen)
            return
        x = order[k]
        for option in options[x]:
            chosen[x] = option
            if all(compatible(f, chosen[f.dom], chosen[f.cod]) for f in due[k]):
                yield from walk(k + 1)
        chosen.pop(x, None)

    yield from walk(0)


def _closure_compatible(f: FinMorphism, cx: np.ndarray, cy: np.ndarray) -> bool:
    img = image_table(f)
    return not np.any(img[cx] & ~cy[img])


def _relation_compatible(f: FinMorphism, rx: np.ndarray, ry: np.ndarray) -> bool:
    pre = preimage_table(f)
    return not np.any(ry & ~rx[np.ix_(pre, pre)])


def enumerate_closures(cat: FinCategory, cap: int | None = None, force: bool = False,
                       idempotent: bool = False) -> Iterator[ClosureOp]:
    _require_enumerable(cat, cap, force)
    pick = idempotent_tables if idempotent else extensive_monotone_tables
    options = {x: pick(cat.size(x)) for x in cat.object_ids}
    return (ClosureOp(cat, maps, f"c#{k}") for k, maps in enumerate(_assign(cat, options, _closure_compatible)))


def enumerate_topogenous(cat: FinCategory, cap: int | None = None, force: bool = False,
                         meet_preserving: bool = False,
                         interpolative: bool = False) -> Iterator[TopogenousOrder]:
    _require_enumerable(cat, cap, force)
    options = {}
    for x in cat.object_ids:
        rels = topogenous_relations(cat.size(x))
        if meet_preserving:
            rels = tuple(r for r in rels if relation_meet_preserving(r))
        if interpolative:
            rels = tuple(r for r in rels if relation_interpolative(r))
        options[x] = rels
    return (TopogenousOrder(cat, rels, f"t#{k}") for k, rels in enumerate(_assign(cat, options, _relation_compatible)))


def enumerate_principal_qubases(cat: FinCategory, cap: int | None = None,
                                force: bool = False) -> Iterator[QUBase]:
    """Singleton bases {U_X} with U idempotent; one per quasi-uniformity."""
    closures = enumerate_closures(cat, cap, force, idempotent=True)
    return (
        QUBase(cat, {x: (EndoMap(x, c.at(x)),) for x in cat.object_ids}, f"b#{k}")
        for k, c in enumerate(closures)
    )


def enumerate_simple_syntops(cat: FinCategory, cap: int | None = None, force: bool = False,
                             coperfect: bool = False) -> Iterator[Syntop]:
    """Single-member structures {⊏} with ⊏ an interpolative topogenous order."""
    orders = enumerate_topogenous(cat, cap, force, meet_preserving=coperfect, interpolative=True)
    return (
        Syntop(cat, {x: (TopogenousRel(x, t.at(x)),) for x in cat.object_ids}, f"s#{k}")
        for k, t in enumerate(orders)
    )


@lru_cache(maxsize=None)
def _object_bases(n: int) -> tuple[tuple[np.ndarray, ...], ...]:
    pool = extensive_monotone_tables(n)
    leq = [[not np.any(a & ~b) for b in pool] for a in pool]
    squares_below = [[leq[pool_index(pool, v[v])][u] for u in range(len(pool))] for v in pool]
    out = []
    for chosen in range(1, 1 << len(pool)):
        members = list(bits(chosen))
        if not all(any(squares_below[v][u] for v in members) for u in members):
            continue
        ok = True
        for i, u in enumerate(members):
            for w in members[i + 1:]:
                meet = pool[u] & pool[w]
                if not any(not np.any(pool[v] & ~meet) for v in members):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(pool[u] for u in members))
    return tuple(out)


def pool_index(pool: Sequence[np.ndarray], table: np.ndarray) -> int:
    for i, t in enumerate(pool):
        if np.array_equal(t, table):
            return i
    raise InputError("table is not an inflationary monotone map")


def _base_compatible(f: FinMorphism, bx: tuple, by: tuple) -> bool:
    img = image_table(f)
    return all(any(not np.any(img[u] & ~v[img]) for u in bx) for v in by)


def enumerate_qubases(cat: FinCategory, cap: int | None = None, force: bool = False) -> Iterator[QUBase]:
    """Every base (U1, U2, U4, U5), redundant members included; carrier <= ENUM_CARRIER only."""
    _require_enumerable(cat, min(enumeration_limit(cap, force), ENUM_CARRIER), False)
    options = {x: _object_bases(cat.size(x)) for x in cat.object_ids}
    return (
        QUBase(cat, {x: tuple(EndoMap(x, t) for t in bases[x]) for x in cat.object_ids}, f"b#{k}")
        for k, bases in enumerate(_assign(cat, options, _base_compatible))
    )


def enumerate_kind(kind: str, cat: FinCategory, cap: int | None = None, force: bool = False,
                   coperfect: bool = False) -> Iterator[Structure]:
    if kind == Kind.CLOSURE:
        return enumerate_closures(cat, cap, force)
    if kind == Kind.TOPOGENOUS:
        return enumerate_topogenous(cat, cap, force)
    if kind == Kind.QUBASE:
        return enumerate_principal_qubases(cat, cap, force)
    if kind == Kind.SYNTOP:
        return enumerate_simple_syntops(cat, cap, force, coperfect=coperfect)
    raise InputError(f"unknown structure kind {kind!r}")


# ---------------------------------------------------------------------------
# Adversarial candidates
# ---------------------------------------------------------------------------

def monotone_hull(table: np.ndarray, n: int) -> np.ndarray:
    """Least monotone table above `table`."""
    out = np.array(table, dtype=np.int64)
    idx = subset_index(n)
    for i in range(n):
        lo = idx[(idx >> i) & 1 == 0]
        out[lo | (1 << i)] |= out[lo]
    return out


def monotone_kernel(table: np.ndarray, n: int) -> np.ndarray:
    """Greatest monotone table below `table`."""
    out = np.array(table, dtype=np.int64)
    idx = subset_index(n)
    for i in range(n):
        lo = idx[(idx >> i) & 1 == 0]
        out[lo] &= out[lo | (1 << i)]
    return out


def idempotent_hull(table: np.ndarray) -> np.ndarray:
    out = np.array(table, dtype=np.int64)
    while True:
        nxt = out[out]
        if np.array_equal(nxt, out):
            return out
        out = nxt


def _perturb_closure(rng: np.random.Generator, c: ClosureOp, pool: list[ClosureOp],
                     idempotent: bool) -> ClosureOp:
    cat = c.category
    maps = {x: np.array(c.at(x), dtype=np.int64) for x in cat.object_ids}
    move = int(rng.integers(0, 4))
    if move in (0, 1) and pool:
        partner = pool[int(rng.integers(0, len(pool)))]
        for x in cat.object_ids:
            maps[x] = maps[x] & partner.at(x) if move == 0 else maps[x] | partner.at(x)
    else:
        x = cat.object_ids[int(rng.integers(0, len(cat.object_ids)))]
        n = cat.size(x)
        if n:
            m = int(rng.integers(0, 1 << n))
            bit = 1 << int(rng.integers(0, n))
            t = maps[x]
            if move == 2:
                t[m] |= bit
                t = monotone_hull(t, n)
            elif not m & bit:
                t[m] &= ~bit
                t = monotone_kernel(t, n)
            maps[x] = t
    if idempotent:
        maps = {x: idempotent_hull(t) for x, t in maps.items()}
    return ClosureOp(cat, {x: _frozen(t) for x, t in maps.items()}, c.id)


def _perturb_relation(rng: np.random.Generator, rel: np.ndarray, n: int) -> np.ndarray:
    out = np.array(rel, dtype=bool)
    m = int(rng.integers(0, 1 << n))
    q = m | int(rng.integers(0, 1 << n))
    if out[m, q]:
        # dropping (m, q) also drops every pair that forces it
        sub = subset_matrix(n)
        out &= ~(sub[m, :][:, None] & sub[:, q][None, :])
        return out
    out[m, q] = True
    return saturate(out)


def _closure_seed(s: Structure) -> ClosureOp | None:
    if isinstance(s, ClosureOp):
        return s
    if isinstance(s, QUBase):
        least = {x: np.bitwise_and.reduce(np.stack([u.table for u in s.at(x)]), axis=0)
                 for x in s.category.object_ids}
        return ClosureOp(s.category, {x: _frozen(t) for x, t in least.items()}, s.id)
    if isinstance(s, (TopogenousOrder, Syntop)):
        rel_of = s.at if isinstance(s, TopogenousOrder) else s.union
        return ClosureOp(s.category, {x: _frozen(row_meets(rel_of(x))) for x in s.category.object_ids}, s.id)
    return None


def structure_digest(s: Structure) -> str:
    h = hashlib.sha1(s.kind.encode())
    for part in s.key:
        if isinstance(part, tuple):
            for piece in part:
                h.update(b"|")
                h.update(piece)
            h.update(b";")
        else:
            h.update(b";")
            h.update(part)
    return h.hexdigest()


def adversarial_candidates(reference: Structure, n: int = DEFAULT_CANDIDATES,
                           seed: int = DEFAULT_SEED, seeds: Iterable[Structure] = (),
                           coperfect: bool = False) -> list[Structure]:
    """
    Up to n valid structures of the reference's kind, on its category, obtained
    by perturbing the reference and the seed structures.  Deterministic for a
    given seed.
    """
    rng = np.random.default_rng(seed)
    cat = reference.category
    kind = reference.kind
    seeds = [s for s in seeds if s.kind == kind and s.category.id == cat.id]

    closure_pool = [c for c in (_closure_seed(s) for s in [reference, *seeds]) if c is not None]
    closure_pool = [c for c in closure_pool if validate(c).ok] or closure_pool
    relation_pool: list[Structure] = [s for s in [reference, *seeds] if isinstance(s, (TopogenousOrder, Syntop))]

    out: list[Structure] = []
    seen: set = set()
    attempts, budget = 0, max(50 * n, 200)
    while len(out) < n and attempts < budget:
        attempts += 1
        cand: Structure | None = None
        toggle = kind in (Kind.TOPOGENOUS, Kind.SYNTOP) and relation_pool and rng.random() < 0.5
        if toggle:
            base = relation_pool[int(rng.integers(0, len(relation_pool)))]
            x = cat.object_ids[int(rng.integers(0, len(cat.object_ids)))]
            size = cat.size(x)
            if isinstance(base, TopogenousOrder):
                rels = dict(base.relations)
                rels[x] = _perturb_relation(rng, base.at(x), size)
                cand = TopogenousOrder(cat, rels, f"adv#{attempts}")
            else:
                fams = dict(base.families)
                members = list(base.at(x))
                k = int(rng.integers(0, len(members)))
                members[k] = TopogenousRel(x, _perturb_relation(rng, members[k].matrix, size))
                fams[x] = tuple(members)
                cand = Syntop(cat, fams, f"adv#{attempts}")
        elif closure_pool:
            start = closure_pool[int(rng.integers(0, len(closure_pool)))]
            c = _perturb_closure(rng, start, closure_pool, idempotent=kind in (Kind.QUBASE, Kind.SYNTOP))
            c = ClosureOp(cat, c.maps, f"adv#{attempts}")
            if kind == Kind.CLOSURE:
                cand = c
            elif kind == Kind.TOPOGENOUS:
                cand = topogenous_of_closure(c)
            else:
                b = QUBase(cat, {x: (EndoMap(x, c.at(x)),) for x in cat.object_ids}, f"adv#{attempts}")
                cand = b if kind == Kind.QUBASE else syntop_of_qubase(b)
            if validate(c).ok and len(closure_pool) < 4 * n:
                closure_pool.append(c)
        if cand is None:
            continue
        if coperfect and isinstance(cand, Syntop) and not is_coperfect(cand):
            continue
        key = cand.key
        if key in seen or not validate(cand).ok:
            continue
        seen.add(key)
        out.append(cand)
        if isinstance(cand, (TopogenousOrder, Syntop)):
            relation_pool.append(cand)
    return out


def candidate_family(kind: str, cat: FinCategory, reference: Structure | None = None, *,
                     seeds: Iterable[Structure] = (), cap: int | None = None, force: bool = False,
                     seed: int = DEFAULT_SEED, n: int = DEFAULT_CANDIDATES,
                     coperfect: bool = False) -> tuple[list[Structure], str]:
    """Exhaustive within the enumeration cap, adversarial above it.  Seeds always join."""
    seeds = [s for s in seeds if s.kind == kind and s.category.id == cat.id]
    if cat.max_carrier <= enumeration_limit(cap, force):
        found = list(enumerate_kind(kind, cat, cap, force, coperfect=coperfect))
        mode = Mode.EXHAUSTIVE
    else:
        if reference is None:
            raise InputError(f"category {cat.id} is above the enumeration cap and no reference was given")
        found = adversarial_candidates(reference, n=n, seed=seed, seeds=seeds, coperfect=coperfect)
        mode = Mode.ADVERSARIAL
    keys = {s.key for s in found}
    for s in seeds:
        if s.key not in keys and (not coperfect or not isinstance(s, Syntop) or is_coperfect(s)):
            found.append(s)
            keys.add(s.key)
    return found, mode


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

def on_required_side(lifted: Structure, candidate: Structure, direction: str) -> tuple[bool, str]:
    if direction not in Direction.ALL:
        raise InputError(f"unknown direction {direction!r}")
    verdict = compare(lifted, candidate)
    if direction in _LIFTED_BELOW:
        return verdict in (Order.LESS, Order.EQUAL), verdict
    return verdict in (Order.GREATER, Order.EQUAL), verdict


def certify_extremal(lifted: Structure, candidates: Sequence[Structure],
                     continuous: Callable[[Structure], bool], direction: str,
                     subject: str = "", mode: str = Mode.EXHAUSTIVE,
                     seed: int | None = None) -> Certificate:
    cert = Certificate(subject or f"{direction} {lifted.kind} {lifted.id}", direction, mode,
                       seed if mode == Mode.ADVERSARIAL else None)
    for k, cand in enumerate(candidates):
        cont = bool(continuous(cand))
        side, verdict = on_required_side(lifted, cand, direction) if cont else (True, "-")
        cert.entries.append({
            "index":      k,
            "digest":     structure_digest(cand),
            "continuous": cont,
            "order":      verdict,
            "on_side":    side,
        })
    return cert


def principality_check(b: QUBase) -> Report:
    rep = Report(f"principality of base {b.id}")
    for x in b.category.object_ids:
        members = b.at(x)
        if not members:
            rep.record(f"{x}: base nonempty", False, {"object": x})
            continue
        least = np.bitwise_and.reduce(np.stack([u.table for u in members]), axis=0)
        rep.record(f"{x}: pointwise meet is a member",
                   any(np.array_equal(least, u.table) for u in members), {"object": x})
        rep.record(f"{x}: least member idempotent", np.array_equal(least[least], least),
                   {"object": x})
        rep.note(f"{x}: least member table {least.tolist()}")
    if rep.ok:
        least = QUBase(
            b.category,
            {x: (EndoMap(x, _frozen(np.bitwise_and.reduce(np.stack([u.table for u in b.at(x)]), axis=0))),)
             for x in b.category.object_ids},
            f"min[{b.id}]",
        )
        verdict = compare(least, b)
        rep.record("least members generate the same filter", verdict == Order.EQUAL, {"order": verdict})
    return rep
