"""
engine/fincat.py

Kernel of finite concrete categories.

Objects carry labelled carriers, morphisms are total function tables and the
factorization system is (surjections, injections).  Subobjects are identified
with subsets and a subset is a plain int bitmask: bit i set means the i-th
carrier element is in.  On top of that live functors, natural
transformations, (co)pointed endofunctors, fibrations and adjunctions,
each with a table-scanning validator that returns a Report.

Usage
-----
    from engine.fincat import FinCategory, image, preimage, validate_category
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping

import numpy as np

from config import DEFAULT_SEED, MAX_CARRIER, MAX_TABLE_CARRIER
from engine.reports import Report


class InputError(ValueError):
    """Malformed tables, unknown ids, object mismatch, cap violations."""


class StructureError(ValueError):
    """A mathematical precondition on an input structure failed."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


# ---------------------------------------------------------------------------
# Subset bitmasks
# ---------------------------------------------------------------------------

def full_mask(n: int) -> int:
    return (1 << n) - 1


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def require_table_cap(n: int, what: str = "operation") -> None:
    if n > MAX_TABLE_CARRIER:
        raise InputError(
            f"{what} needs a full powerset table; carrier {n} exceeds the cap "
            f"of {MAX_TABLE_CARRIER}"
        )


def sample_subsets(n: int, limit: int = 256, seed: int = DEFAULT_SEED) -> list[int]:
    """All subsets when the carrier is within the table cap, else a seeded sample."""
    if n <= MAX_TABLE_CARRIER:
        return list(range(1 << n))
    rng = np.random.default_rng(seed)
    picks = {0, full_mask(n)}
    while len(picks) < limit:
        picks.add(int(rng.integers(0, 1 << n)))
    return sorted(picks)


# ---------------------------------------------------------------------------
# Objects, subsets, morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinObject:
    id: str
    carrier: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.carrier)

    @property
    def top(self) -> int:
        """The full subset 1_X."""
        return full_mask(self.size)

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.carrier[i] for i in bits(mask))

    def mask_of_labels(self, labels: Iterable[str]) -> int:
        index = {lab: i for i, lab in enumerate(self.carrier)}
        try:
            return mask_of(index[lab] for lab in labels)
        except KeyError as exc:
            raise InputError(f"label {exc.args[0]!r} not in carrier of {self.id}") from None

    def render(self, mask: int) -> str:
        return "{" + ",".join(self.labels_of(mask)) + "}"


@dataclass(frozen=True)
class Subset:
    obj: str
    mask: int

    def render(self, obj: FinObject) -> str:
        return obj.render(self.mask)


@dataclass(frozen=True)
class FinMorphism:
    id: str
    dom: str
    cod: str
    map: tuple[int, ...]
    cod_size: int

    @property
    def dom_size(self) -> int:
        return len(self.map)

    def __call__(self, i: int) -> int:
        return self.map[i]

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod_size

    def then(self, other: "FinMorphism") -> tuple[int, ...]:
        """Table of other ∘ self (self first)."""
        return tuple(other.map[j] for j in self.map)


def _check_mask(mask: int, n: int, where: str) -> None:
    if mask < 0 or mask >> n:
        raise InputError(f"subset {mask} does not fit the {n}-element carrier of {where}")


def image(f: FinMorphism, m: int | Subset) -> int | Subset:
    """f(m), the setwise image."""
    if isinstance(m, Subset):
        if m.obj != f.dom:
            raise InputError(f"image: subset lives on {m.obj}, {f.id} starts at {f.dom}")
        return Subset(f.cod, image(f, m.mask))
    _check_mask(m, f.dom_size, f.dom)
    out = 0
    for i in bits(m):
        out |= 1 << f.map[i]
    return out


def preimage(f: FinMorphism, n: int | Subset) -> int | Subset:
    """f⁻¹(n), the setwise preimage."""
    if isinstance(n, Subset):
        if n.obj != f.cod:
            raise InputError(f"preimage: subset lives on {n.obj}, {f.id} ends at {f.cod}")
        return Subset(f.dom, preimage(f, n.mask))
    _check_mask(n, f.cod_size, f.cod)
    out = 0
    for i, j in enumerate(f.map):
        if n >> j & 1:
            out |= 1 << i
    return out


@lru_cache(maxsize=8192)
def _image_table(mapping: tuple[int, ...]) -> np.ndarray:
    table = np.zeros(1 << len(mapping), dtype=np.int64)
    for mask in range(1, table.size):
        low = mask & -mask
        table[mask] = table[mask ^ low] | (1 << mapping[low.bit_length() - 1])
    table.setflags(write=False)
    return table


@lru_cache(maxsize=8192)
def _preimage_table(mapping: tuple[int, ...], cod_size: int) -> np.ndarray:
    fibres = [0] * cod_size
    for i, j in enumerate(mapping):
        fibres[j] |= 1 << i
    table = np.zeros(1 << cod_size, dtype=np.int64)
    for mask in range(1, table.size):
        low = mask & -mask
        table[mask] = table[mask ^ low] | fibres[low.bit_length() - 1]
    table.setflags(write=False)
    return table


def image_table(f: FinMorphism) -> np.ndarray:
    """Array of length 2^|dom|: entry m is f(m)."""
    require_table_cap(f.dom_size, f"image table of {f.id}")
    return _image_table(f.map)


def preimage_table(f: FinMorphism) -> np.ndarray:
    """Array of length 2^|cod|: entry n is f⁻¹(n)."""
    require_table_cap(f.cod_size, f"preimage table of {f.id}")
    return _preimage_table(f.map, f.cod_size)


def factorize(f: FinMorphism) -> tuple[FinMorphism, FinMorphism]:
    """Split f into a surjection onto its image followed by the inclusion."""
    if any(j < 0 or j >= f.cod_size for j in f.map):
        raise InputError(f"morphism {f.id} has a table entry outside its codomain")
    points = sorted(set(f.map))
    rank = {j: k for k, j in enumerate(points)}
    mid = f"im({f.id})"
    e = FinMorphism(f"{f.id}.e", f.dom, mid, tuple(rank[j] for j in f.map), len(points))
    m = FinMorphism(f"{f.id}.m", mid, f.cod, tuple(points), f.cod_size)
    return e, m


def image_object(cat: "FinCategory", f: FinMorphism) -> FinObject:
    """The middle object of factorize(f), labelled in codomain order."""
    cod = cat.obj(f.cod)
    return FinObject(f"im({f.id})", tuple(cod.carrier[j] for j in sorted(set(f.map))))


# ---------------------------------------------------------------------------
# Categories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinCategory:
    id: str
    objects: tuple[FinObject, ...]
    morphisms: tuple[FinMorphism, ...]
    # Optional explicit composition entries (g, f, g∘f).  When absent the
    # composite is looked up by function table.
    composition: tuple[tuple[str, str, str], ...] = ()

    @cached_property
    def _objects(self) -> dict[str, FinObject]:
        return {o.id: o for o in self.objects}

    @cached_property
    def _morphisms(self) -> dict[str, FinMorphism]:
        return {f.id: f for f in self.morphisms}

    @cached_property
    def _by_table(self) -> dict[tuple[str, str, tuple[int, ...]], FinMorphism]:
        out: dict = {}
        for f in self.morphisms:
            out.setdefault((f.dom, f.cod, f.map), f)
        return out

    @cached_property
    def _explicit(self) -> dict[tuple[str, str], str]:
        return {(g, f): h for g, f, h in self.composition}

    @cached_property
    def _outgoing(self) -> dict[str, list[FinMorphism]]:
        out: dict[str, list[FinMorphism]] = {o.id: [] for o in self.objects}
        for f in self.morphisms:
            out.setdefault(f.dom, []).append(f)
        return out

    def obj(self, oid: str) -> FinObject:
        try:
            return self._objects[oid]
        except KeyError:
            raise InputError(f"unknown object {oid!r} in category {self.id}") from None

    def mor(self, mid: str) -> FinMorphism:
        try:
            return self._morphisms[mid]
        except KeyError:
            raise InputError(f"unknown morphism {mid!r} in category {self.id}") from None

    def has_object(self, oid: str) -> bool:
        return oid in self._objects

    def size(self, oid: str) -> int:
        return self.obj(oid).size

    @property
    def object_ids(self) -> list[str]:
        return [o.id for o in self.objects]

    @property
    def max_carrier(self) -> int:
        return max((o.size for o in self.objects), default=0)

    def outgoing(self, oid: str) -> list[FinMorphism]:
        return self._outgoing.get(oid, [])

    def hom(self, x: str, y: str) -> list[FinMorphism]:
        return [f for f in self.outgoing(x) if f.cod == y]

    def find(self, dom: str, cod: str, table: tuple[int, ...]) -> FinMorphism | None:
        return self._by_table.get((dom, cod, tuple(table)))

    def identity(self, oid: str) -> FinMorphism:
        n = self.size(oid)
        f = self.find(oid, oid, tuple(range(n)))
        if f is None:
            raise InputError(f"object {oid} has no identity morphism in {self.id}")
        return f

    def compose(self, g: FinMorphism, f: FinMorphism) -> FinMorphism:
        """g ∘ f."""
        if f.cod != g.dom:
            raise InputError(f"cannot compose {g.id} after {f.id}: {f.cod} != {g.dom}")
        explicit = self._explicit.get((g.id, f.id))
        if explicit is not None:
            return self.mor(explicit)
        h = self.find(f.dom, g.cod, f.then(g))
        if h is None:
            raise InputError(f"composite {g.id}∘{f.id} is not a morphism of {self.id}")
        return h


def full_subcategory(cat: FinCategory, object_ids: Iterable[str], cat_id: str | None = None) -> FinCategory:
    keep = set(object_ids)
    return FinCategory(
        id=cat_id or f"{cat.id}|sub",
        objects=tuple(o for o in cat.objects if o.id in keep),
        morphisms=tuple(f for f in cat.morphisms if f.dom in keep and f.cod in keep),
        composition=tuple(
            e for e in cat.composition
            if all(cat.mor(m).dom in keep and cat.mor(m).cod in keep for m in e)
        ),
    )


# ---------------------------------------------------------------------------
# Subset-level law checks
# ---------------------------------------------------------------------------

def check_adjunction_laws(f: FinMorphism) -> Report:
    """f(f⁻¹(n)) ⊆ n (= under E) and m ⊆ f⁻¹(f(m)) (= under M), on all subsets."""
    rep = Report(f"image/preimage adjunction of {f.id}")
    surj, inj = f.is_surjective, f.is_injective

    deflate = exact_e = True
    w_deflate = w_exact_e = None
    for n in sample_subsets(f.cod_size):
        back = image(f, preimage(f, n))
        if deflate and not is_subset(back, n):
            deflate, w_deflate = False, {"n": n, "f(f^-1(n))": back}
        if surj and exact_e and back != n:
            exact_e, w_exact_e = False, {"n": n, "f(f^-1(n))": back}

    inflate = exact_m = True
    w_inflate = w_exact_m = None
    for m in sample_subsets(f.dom_size):
        back = preimage(f, image(f, m))
        if inflate and not is_subset(m, back):
            inflate, w_inflate = False, {"m": m, "f^-1(f(m))": back}
        if inj and exact_m and back != m:
            exact_m, w_exact_m = False, {"m": m, "f^-1(f(m))": back}

    rep.record("image of preimage is deflationary", deflate, w_deflate)
    if surj:
        rep.record("image of preimage is the identity (surjective)", exact_e, w_exact_e)
    rep.record("preimage of image is inflationary", inflate, w_inflate)
    if inj:
        rep.record("preimage of image is the identity (injective)", exact_m, w_exact_m)
    return rep


def check_square_law(f: FinMorphism, f_prime: FinMorphism,
                     p: FinMorphism, p_prime: FinMorphism) -> Report:
    """
    Square  X' --f'--> Y'
            |p'        |p
            X  --f-->  Y
    with p∘f' = f∘p'.  Checks p'(f'⁻¹(n)) ⊆ f⁻¹(p(n)) for every n ⊆ Y'.
    """
    shape_ok = (
        f_prime.dom == p_prime.dom and f_prime.cod == p.dom
        and p_prime.cod == f.dom and p.cod == f.cod
    )
    if not shape_ok or f_prime.then(p) != p_prime.then(f):
        raise InputError(
            f"square ({f.id}, {f_prime.id}, {p.id}, {p_prime.id}) does not commute"
        )
    rep = Report(f"square ({f.id}, {f_prime.id}, {p.id}, {p_prime.id})")
    witness = None
    for n in sample_subsets(f_prime.cod_size):
        left = image(p_prime, preimage(f_prime, n))
        right = preimage(f, image(p, n))
        if not is_subset(left, right):
            witness = {"n": n, "p'(f'^-1(n))": left, "f^-1(p(n))": right}
            break
    rep.record("p'(f'^-1(n)) <= f^-1(p(n))", witness is None, witness)
    return rep


def check_e_stability(cat: FinCategory) -> Report:
    """Surjections restrict to surjections over every subset of the codomain."""
    rep = Report(f"E-stability of {cat.id}")
    witness = None
    for e in cat.morphisms:
        if not e.is_surjective:
            continue
        for n in sample_subsets(e.cod_size, limit=64):
            if image(e, preimage(e, n)) != n:
                witness = {"morphism": e.id, "n": n}
                break
        if witness:
            break
    rep.record("surjections stable under pullback along injections", witness is None, witness)
    return rep


# ---------------------------------------------------------------------------
# Category validation
# ---------------------------------------------------------------------------

def validate_category(cat: FinCategory) -> Report:
    rep = Report(f"category {cat.id}")

    ids = [o.id for o in cat.objects]
    dup = next((i for i in ids if ids.count(i) > 1), None)
    rep.record("object ids unique", dup is None, {"object": dup})
    mids = [f.id for f in cat.morphisms]
    dup = next((i for i in mids if mids.count(i) > 1), None)
    rep.record("morphism ids unique", dup is None, {"morphism": dup})

    bad = None
    for o in cat.objects:
        if len(set(o.carrier)) != o.size:
            bad = {"object": o.id, "problem": "repeated label"}
        elif o.size > MAX_CARRIER:
            bad = {"object": o.id, "problem": f"carrier {o.size} > cap {MAX_CARRIER}"}
        if bad:
            break
    rep.record("carriers well formed", bad is None, bad)

    bad = None
    for f in cat.morphisms:
        if not (cat.has_object(f.dom) and cat.has_object(f.cod)):
            bad = {"morphism": f.id, "problem": "unknown dom/cod"}
        elif len(f.map) != cat.size(f.dom):
            bad = {"morphism": f.id, "problem": "table is not total"}
        elif f.cod_size != cat.size(f.cod) or any(j < 0 or j >= f.cod_size for j in f.map):
            bad = {"morphism": f.id, "problem": "entry outside codomain"}
        if bad:
            break
    rep.record("morphism tables total and in range", bad is None, bad)
    if not rep.ok:
        return rep

    seen: dict = {}
    bad = None
    for f in cat.morphisms:
        key = (f.dom, f.cod, f.map)
        if key in seen:
            bad = {"morphisms": [seen[key], f.id]}
            break
        seen[key] = f.id
    rep.record("distinct morphisms have distinct tables", bad is None, bad)

    missing = next((o.id for o in cat.objects if cat.find(o.id, o.id, tuple(range(o.size))) is None), None)
    rep.record("identities exist", missing is None, {"object": missing})
    if missing is not None:
        return rep

    bad = None
    for g_id, f_id, h_id in cat.composition:
        unknown = [mid for mid in (g_id, f_id, h_id) if mid not in cat._morphisms]
        if unknown:
            bad = {"g": g_id, "f": f_id, "declared": h_id, "unknown": unknown}
            break
    if cat.composition:
        rep.record("composition table names known morphisms", bad is None, bad)
    if bad is not None:
        return rep

    # Explicit composition entries must agree with function composition.
    bad = None
    for g_id, f_id, h_id in cat.composition:
        g, f, h = cat.mor(g_id), cat.mor(f_id), cat.mor(h_id)
        if f.cod != g.dom or h.dom != f.dom or h.cod != g.cod or h.map != f.then(g):
            bad = {"g": g_id, "f": f_id, "declared": h_id}
            break
    if cat.composition:
        rep.record("composition table agrees with function tables", bad is None, bad)

    bad = None
    for f in cat.morphisms:
        for g in cat.outgoing(f.cod):
            try:
                cat.compose(g, f)
            except InputError:
                bad = {"g": g.id, "f": f.id}
                break
        if bad:
            break
    rep.record("composition closed", bad is None, bad)

    bad = None
    for f in cat.morphisms:
        if cat.compose(cat.identity(f.cod), f).id != f.id or cat.compose(f, cat.identity(f.dom)).id != f.id:
            bad = {"morphism": f.id}
            break
    rep.record("identities neutral", bad is None, bad)

    if cat.composition and rep.passed("composition closed") and rep.passed("identities neutral"):
        bad = None
        for f in cat.morphisms:
            for g in cat.outgoing(f.cod):
                gf = cat.compose(g, f)
                for h in cat.outgoing(g.cod):
                    if cat.compose(h, gf).id != cat.compose(cat.compose(h, g), f).id:
                        bad = {"h": h.id, "g": g.id, "f": f.id}
                        break
                if bad:
                    break
            if bad:
                break
        rep.record("composition associative", bad is None, bad)
    else:
        rep.note("composition derived from function tables, associative by construction")

    bad = None
    for f in cat.morphisms:
        e, m = factorize(f)
        if not (e.is_surjective and m.is_injective and e.then(m) == f.map):
            bad = {"morphism": f.id}
            break
    rep.record("(surjection, injection) factorization", bad is None, bad)

    rep.extend(check_e_stability(cat), prefix="")
    return rep


# ---------------------------------------------------------------------------
# Functors and natural transformations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FunctorData:
    id: str
    source: FinCategory
    target: FinCategory
    obj_map: Mapping[str, str]
    mor_map: Mapping[str, str]
    # Per source object, the action sub X -> sub FX as a table of bitmasks.
    # Omitted objects act as the identity, which needs equal carrier sizes.
    subobject_maps: Mapping[str, tuple[int, ...]] | None = None
    preserves_subobjects: bool = True

    def on_obj(self, x: str) -> str:
        try:
            return self.obj_map[x]
        except KeyError:
            raise InputError(f"functor {self.id} does not map object {x!r}") from None

    def on_mor(self, f: FinMorphism | str) -> FinMorphism:
        fid = f if isinstance(f, str) else f.id
        try:
            return self.target.mor(self.mor_map[fid])
        except KeyError:
            raise InputError(f"functor {self.id} does not map morphism {fid!r}") from None

    def subset_table(self, x: str) -> np.ndarray:
        """Array of length 2^|X|: entry m is the subobject Fm of FX."""
        n = self.source.size(x)
        require_table_cap(n, f"subobject action of {self.id}")
        if self.subobject_maps and x in self.subobject_maps:
            table = np.asarray(self.subobject_maps[x], dtype=np.int64)
            if table.shape != (1 << n,):
                raise InputError(f"functor {self.id}: subobject table at {x} has wrong length")
            return table
        if self.target.size(self.on_obj(x)) != n:
            raise InputError(
                f"functor {self.id} changes the carrier of {x} and has no subobject table"
            )
        return np.arange(1 << n, dtype=np.int64)

    def on_subset(self, x: str, m: int) -> int:
        return int(self.subset_table(x)[m])


def identity_functor(cat: FinCategory) -> FunctorData:
    return FunctorData(
        id=f"1:{cat.id}",
        source=cat,
        target=cat,
        obj_map={o.id: o.id for o in cat.objects},
        mor_map={f.id: f.id for f in cat.morphisms},
    )


def compose_functors(g: FunctorData, f: FunctorData) -> FunctorData:
    """G∘F (F first)."""
    if f.target.id != g.source.id:
        raise InputError(f"cannot compose {g.id} after {f.id}: categories differ")
    sub = None
    if f.subobject_maps or g.subobject_maps:
        sub = {}
        for x in f.source.object_ids:
            fx = f.on_obj(x)
            ft, gt = f.subset_table(x), g.subset_table(fx)
            sub[x] = tuple(int(v) for v in gt[ft])
    return FunctorData(
        id=f"{g.id}*{f.id}",
        source=f.source,
        target=g.target,
        obj_map={x: g.on_obj(f.on_obj(x)) for x in f.source.object_ids},
        mor_map={m.id: g.on_mor(f.on_mor(m)).id for m in f.source.morphisms},
        subobject_maps=sub,
        preserves_subobjects=f.preserves_subobjects and g.preserves_subobjects,
    )


def validate_functor(F: FunctorData) -> Report:
    rep = Report(f"functor {F.id}")
    src, tgt = F.source, F.target

    bad = next((x for x in src.object_ids if x not in F.obj_map or not tgt.has_object(F.obj_map[x])), None)
    rep.record("objects mapped", bad is None, {"object": bad})
    bad = None
    for f in src.morphisms:
        mid = F.mor_map.get(f.id)
        if mid is None or mid not in tgt._morphisms:
            bad = {"morphism": f.id}
            break
    rep.record("morphisms mapped", bad is None, bad)
    if not rep.ok:
        return rep

    bad = None
    for f in src.morphisms:
        Ff = F.on_mor(f)
        if Ff.dom != F.on_obj(f.dom) or Ff.cod != F.on_obj(f.cod):
            bad = {"morphism": f.id, "image": Ff.id}
            break
    rep.record("dom/cod preserved", bad is None, bad)

    bad = None
    for x in src.object_ids:
        if F.on_mor(src.identity(x)).id != tgt.identity(F.on_obj(x)).id:
            bad = {"object": x}
            break
    rep.record("identities preserved", bad is None, bad)
    if not rep.ok:
        return rep

    bad = None
    for f in src.morphisms:
        for g in src.outgoing(f.cod):
            lhs = F.on_mor(src.compose(g, f))
            rhs = tgt.compose(F.on_mor(g), F.on_mor(f))
            if lhs.id != rhs.id:
                bad = {"g": g.id, "f": f.id, "F(g∘f)": lhs.id, "Fg∘Ff": rhs.id}
                break
        if bad:
            break
    rep.record("composition preserved", bad is None, bad)

    if F.preserves_subobjects:
        rep.extend(check_subobject_preservation(F), prefix="")
    return rep


def check_subobject_preservation(F: FunctorData) -> Report:
    rep = Report(f"subobject action of {F.id}")
    bad = None
    for x in F.source.object_ids:
        try:
            t = F.subset_table(x)
        except InputError as exc:
            bad = {"object": x, "problem": str(exc)}
            break
        n, fx = F.source.size(x), F.on_obj(x)
        if np.any(t < 0) or np.any(t >> F.target.size(fx)):
            bad = {"object": x, "problem": "entry outside sub FX"}
        elif int(t[full_mask(n)]) != F.target.obj(fx).top:
            bad = {"object": x, "problem": "F(1_X) is not 1_FX"}
        else:
            for i in range(n):
                lower = np.array([m for m in range(1 << n) if not m >> i & 1], dtype=np.int64)
                if lower.size and np.any(t[lower] & ~t[lower | (1 << i)]):
                    bad = {"object": x, "problem": "not monotone"}
                    break
        if bad:
            break
    rep.record("subobject action well formed and monotone", bad is None, bad)
    if bad:
        return rep

    bad = None
    for f in F.source.morphisms:
        Ff = F.on_mor(f)
        src_t, tgt_t = F.subset_table(f.dom), F.subset_table(f.cod)
        img, Fimg = image_table(f), image_table(Ff)
        diff = np.nonzero(Fimg[src_t] != tgt_t[img])[0]
        if diff.size:
            bad = {"morphism": f.id, "m": int(diff[0])}
            break
    rep.record("images preserved: (Ff)(Fm) = F(f(m))", bad is None, bad)
    return rep


@dataclass(frozen=True, eq=False)
class NatTransData:
    id: str
    source: FunctorData
    target: FunctorData
    components: Mapping[str, str]

    @property
    def category(self) -> FinCategory:
        """Where the components live (the functors' common target)."""
        return self.source.target

    def component(self, x: str) -> FinMorphism:
        try:
            return self.category.mor(self.components[x])
        except KeyError:
            raise InputError(f"{self.id} has no component at {x!r}") from None


def validate_nat(eta: NatTransData) -> Report:
    rep = Report(f"natural transformation {eta.id}")
    F, G = eta.source, eta.target
    same = F.source.id == G.source.id and F.target.id == G.target.id
    rep.record("functors parallel", same, {"source": F.id, "target": G.id})
    if not same:
        return rep

    bad = None
    for x in F.source.object_ids:
        if x not in eta.components or eta.components[x] not in eta.category._morphisms:
            bad = {"object": x, "problem": "missing component"}
            break
        c = eta.component(x)
        if c.dom != F.on_obj(x) or c.cod != G.on_obj(x):
            bad = {"object": x, "component": c.id, "problem": "wrong dom/cod"}
            break
    rep.record("components typed F(X) -> G(X)", bad is None, bad)
    if bad:
        return rep

    bad = None
    for f in F.source.morphisms:
        left = eta.component(f.dom).then(G.on_mor(f))     # G(f) ∘ η_X
        right = F.on_mor(f).then(eta.component(f.cod))    # η_Y ∘ F(f)
        if left != right:
            bad = {"morphism": f.id}
            break
    rep.record("naturality squares commute", bad is None, bad)
    if bad:
        return rep

    bad = None
    for f in F.source.morphisms:
        square = check_square_law(G.on_mor(f), F.on_mor(f), eta.component(f.cod), eta.component(f.dom))
        if not square.ok:
            bad = {"morphism": f.id, **(square.failures[0].witness or {})}
            break
    rep.record("p'(f'^-1(n)) <= f^-1(p(n)) on naturality squares", bad is None, bad)
    return rep


# ---------------------------------------------------------------------------
# Pointed / copointed endofunctors
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PointedEndo:
    id: str
    functor: FunctorData
    unit: NatTransData          # 1_C -> F

    @property
    def category(self) -> FinCategory:
        return self.functor.source

    def eta(self, x: str) -> FinMorphism:
        return self.unit.component(x)

    @property
    def e_pointed(self) -> bool:
        return all(self.eta(x).is_surjective for x in self.category.object_ids)


@dataclass(frozen=True, eq=False)
class CopointedEndo:
    id: str
    functor: FunctorData
    counit: NatTransData        # G -> 1_C

    @property
    def category(self) -> FinCategory:
        return self.functor.source

    def epsilon(self, x: str) -> FinMorphism:
        return self.counit.component(x)

    @property
    def m_copointed(self) -> bool:
        return all(self.epsilon(x).is_injective for x in self.category.object_ids)


def _is_identity_on(F: FunctorData, cat: FinCategory) -> bool:
    return (
        F.source.id == cat.id and F.target.id == cat.id
        and all(F.obj_map.get(x) == x for x in cat.object_ids)
        and all(F.mor_map.get(f.id) == f.id for f in cat.morphisms)
    )


def validate_pointed(p: PointedEndo) -> Report:
    rep = Report(f"pointed endofunctor {p.id}")
    F = p.functor
    rep.record("endofunctor", F.source.id == F.target.id, {"source": F.source.id, "target": F.target.id})
    rep.extend(validate_functor(F), prefix="functor")
    rep.record("unit starts at the identity functor", _is_identity_on(p.unit.source, p.category),
               {"source": p.unit.source.id})
    rep.record("unit ends at F", p.unit.target is F or p.unit.target.id == F.id, {"target": p.unit.target.id})
    if rep.ok:
        rep.extend(validate_nat(p.unit), prefix="unit")
    if rep.ok:
        rep.note(f"E-pointed: {p.e_pointed}")
    return rep


def validate_copointed(q: CopointedEndo) -> Report:
    rep = Report(f"copointed endofunctor {q.id}")
    G = q.functor
    rep.record("endofunctor", G.source.id == G.target.id, {"source": G.source.id, "target": G.target.id})
    rep.extend(validate_functor(G), prefix="functor")
    rep.record("counit starts at G", q.counit.source is G or q.counit.source.id == G.id,
               {"source": q.counit.source.id})
    rep.record("counit ends at the identity functor", _is_identity_on(q.counit.target, q.category),
               {"target": q.counit.target.id})
    if rep.ok:
        rep.extend(validate_nat(q.counit), prefix="counit")
    if rep.ok:
        rep.note(f"M-copointed: {q.m_copointed}")
    return rep


def identity_pointed(cat: FinCategory) -> PointedEndo:
    one = identity_functor(cat)
    unit = NatTransData(f"id:{cat.id}", one, one, {x: cat.identity(x).id for x in cat.object_ids})
    return PointedEndo(f"1:{cat.id}", one, unit)


def identity_copointed(cat: FinCategory) -> CopointedEndo:
    one = identity_functor(cat)
    counit = NatTransData(f"id:{cat.id}", one, one, {x: cat.identity(x).id for x in cat.object_ids})
    return CopointedEndo(f"1:{cat.id}", one, counit)


# ---------------------------------------------------------------------------
# Fibrations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FibrationData:
    id: str
    functor: FunctorData
    gamma: Mapping[str, tuple[int, ...]]    # sub X  -> sub FX
    delta: Mapping[str, tuple[int, ...]]    # sub FX -> sub X
    initial: frozenset[str] = frozenset()

    def gamma_table(self, x: str) -> np.ndarray:
        return np.asarray(self.gamma[x], dtype=np.int64)

    def delta_table(self, x: str) -> np.ndarray:
        return np.asarray(self.delta[x], dtype=np.int64)


def identity_fibration(cat: FinCategory) -> FibrationData:
    one = identity_functor(cat)
    ident = {x: tuple(range(1 << cat.size(x))) for x in cat.object_ids}
    return FibrationData(f"1:{cat.id}", one, ident, dict(ident), frozenset())


def validate_fibration(fd: FibrationData) -> Report:
    rep = Report(f"fibration {fd.id}")
    F = fd.functor
    rep.extend(validate_functor(F), prefix="functor")
    if not rep.ok:
        return rep
    A = F.source

    bad = None
    for x in A.object_ids:
        for y in A.object_ids:
            images = [F.on_mor(f).id for f in A.hom(x, y)]
            if len(set(images)) != len(images):
                bad = {"dom": x, "cod": y}
                break
        if bad:
            break
    rep.record("faithful", bad is None, bad)

    bad = None
    for x in A.object_ids:
        n, k = A.size(x), F.target.size(F.on_obj(x))
        g, d = fd.gamma.get(x), fd.delta.get(x)
        if g is None or d is None or len(g) != 1 << n or len(d) != 1 << k:
            bad = {"object": x, "problem": "gamma/delta missing or wrong length"}
        elif any(d[g[m]] != m for m in range(1 << n)) or any(g[d[q]] != q for q in range(1 << k)):
            bad = {"object": x, "problem": "gamma and delta are not inverse"}
        elif any(not is_subset(g[m], g[m | 1 << i]) for m in range(1 << n) for i in range(n)):
            bad = {"object": x, "problem": "gamma not monotone"}
        if bad:
            break
    rep.record("gamma/delta inverse monotone bijections", bad is None, bad)
    if bad:
        return rep

    bad = None
    for x in A.object_ids:
        if not np.array_equal(F.subset_table(x), fd.gamma_table(x)):
            bad = {"object": x}
            break
    rep.record("functor acts on subobjects by gamma", bad is None, bad)

    # The four compatibility laws between γ/δ and image/preimage.
    laws = {
        "gamma(f(m)) = Ff(gamma(m))":        None,
        "f(delta(n)) = delta(Ff(n))":        None,
        "f^-1(delta(n)) = delta(Ff^-1(n))":  None,
        "gamma(f^-1(n)) = Ff^-1(gamma(n))":  None,
    }
    for f in A.morphisms:
        Ff = F.on_mor(f)
        gx, gy = fd.gamma_table(f.dom), fd.gamma_table(f.cod)
        dx, dy = fd.delta_table(f.dom), fd.delta_table(f.cod)
        img, pre = image_table(f), preimage_table(f)
        Fimg, Fpre = image_table(Ff), preimage_table(Ff)
        checks = [
            ("gamma(f(m)) = Ff(gamma(m))",       gy[img], Fimg[gx]),
            ("f(delta(n)) = delta(Ff(n))",       img[dx], dy[Fimg]),
            ("f^-1(delta(n)) = delta(Ff^-1(n))", pre[dy], dx[Fpre]),
            ("gamma(f^-1(n)) = Ff^-1(gamma(n))", gx[pre], Fpre[gy]),
        ]
        for name, lhs, rhs in checks:
            if laws[name] is None:
                diff = np.nonzero(lhs != rhs)[0]
                if diff.size:
                    laws[name] = {"morphism": f.id, "subset": int(diff[0])}
    for name, witness in laws.items():
        rep.record(name, witness is None, witness)

    bad = next((m for m in fd.initial if m not in A._morphisms), None)
    rep.record("designated initial morphisms exist", bad is None, {"morphism": bad})
    return rep


# ---------------------------------------------------------------------------
# Adjunctions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AdjunctionData:
    id: str
    left: FunctorData               # F: A -> C
    right: FunctorData              # G: C -> A
    unit: NatTransData              # 1_A -> GF
    counit: NatTransData | None = None   # FG -> 1_C

    @property
    def source(self) -> FinCategory:
        return self.left.source

    def eta(self, x: str) -> FinMorphism:
        return self.unit.component(x)


def identity_adjunction(cat: FinCategory) -> AdjunctionData:
    one = identity_functor(cat)
    both = compose_functors(one, one)
    comps = {x: cat.identity(x).id for x in cat.object_ids}
    return AdjunctionData(
        f"1:{cat.id}", one, one,
        NatTransData(f"eta:{cat.id}", identity_functor(cat), both, comps),
        NatTransData(f"eps:{cat.id}", both, identity_functor(cat), dict(comps)),
    )


def validate_adjunction(ad: AdjunctionData) -> Report:
    rep = Report(f"adjunction {ad.id}")
    F, G = ad.left, ad.right
    A, C = F.source, F.target
    rep.record("F: A -> C and G: C -> A", G.source.id == C.id and G.target.id == A.id,
               {"F": F.id, "G": G.id})
    if not rep.ok:
        return rep
    rep.extend(validate_functor(F), prefix="F")
    rep.extend(validate_functor(G), prefix="G")
    if not rep.ok:
        return rep

    GF = compose_functors(G, F)
    rep.record("unit starts at 1_A", _is_identity_on(ad.unit.source, A), {"source": ad.unit.source.id})
    typed = all(ad.unit.target.obj_map.get(x) == GF.on_obj(x) for x in A.object_ids)
    rep.record("unit ends at GF", typed, {"target": ad.unit.target.id})
    if rep.ok:
        rep.extend(validate_nat(ad.unit), prefix="unit")

    if ad.counit is None:
        rep.note("no counit supplied: triangle identities not checked")
        return rep

    FG = compose_functors(F, G)
    typed = all(ad.counit.source.obj_map.get(y) == FG.on_obj(y) for y in C.object_ids)
    rep.record("counit starts at FG", typed, {"source": ad.counit.source.id})
    rep.record("counit ends at 1_C", _is_identity_on(ad.counit.target, C), {"target": ad.counit.target.id})
    if not rep.ok:
        return rep
    rep.extend(validate_nat(ad.counit), prefix="counit")
    if not rep.ok:
        return rep

    bad = None
    for x in A.object_ids:
        fx = F.on_obj(x)
        lhs = F.on_mor(ad.eta(x)).then(ad.counit.component(fx))      # ε_FX ∘ F(η_X)
        if lhs != tuple(range(C.size(fx))):
            bad = {"object": x}
            break
    rep.record("triangle: eps_F . F(eta) = id", bad is None, bad)

    bad = None
    for y in C.object_ids:
        gy = G.on_obj(y)
        lhs = ad.eta(gy).then(G.on_mor(ad.counit.component(y)))      # G(ε_Y) ∘ η_GY
        if lhs != tuple(range(A.size(gy))):
            bad = {"object": y}
            break
    rep.record("triangle: G(eps) . eta_G = id", bad is None, bad)
    return rep
