"""
engine/lifting.py

The four lifting families, each in three representations.

    pointed    (F, η: 1 -> F)            structure on C  ->  structure on C
    copointed  (G, ε: G -> 1)            structure on C  ->  structure on C
    fibration  F: A -> C with γ, δ       structure on C  ->  structure on A
    adjoint    F -| G, η: 1 -> GF        structure on C  ->  structure on A

LIFTS maps (family, representation) to a LiftSpec: the lift function, the
formula it applies, the extremal claim and the properties it carries over.
certify_lift runs one lift and assembles the full report: validation,
continuity of the designated maps, preservation checklist and the oracle
certificate for the extremal claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from config import DEFAULT_CANDIDATES, DEFAULT_SEED
from engine import oracle
from engine.fincat import (
    AdjunctionData,
    CopointedEndo,
    FibrationData,
    FinCategory,
    InputError,
    PointedEndo,
    StructureError,
    check_subobject_preservation,
    image_table,
    preimage_table,
)
from engine.galois import qubase_of_syntop, syntop_of_qubase
from engine.oracle import Direction
from engine.reports import Certificate, Report
from engine.structures import (
    ClosureOp,
    EndoMap,
    Kind,
    QUBase,
    Structure,
    Syntop,
    TopogenousRel,
    coperfect_witness,
    functor_continuity,
    is_coperfect,
    is_idempotent,
    is_initial,
    is_interpolative,
    is_transitive_base,
    morphism_continuity,
    pull_relation,
    subset_index,
    subset_matrix,
    validate,
)


class Family:
    POINTED   = "pointed"
    COPOINTED = "copointed"
    FIBRATION = "fibration"
    ADJOINT   = "adjoint"

    ALL = (POINTED, COPOINTED, FIBRATION, ADJOINT)


REPRS = (Kind.SYNTOP, Kind.QUBASE, Kind.CLOSURE)

Transform = Union[PointedEndo, CopointedEndo, FibrationData, AdjunctionData]


def _freeze(arr) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


def _require_on(s: Structure, cat: FinCategory, what: str) -> None:
    if s.category.id != cat.id:
        raise InputError(f"{what} needs a structure on {cat.id}, {s.id} lives on {s.category.id}")


def _warn_not_idempotent(c: ClosureOp, verbose: bool) -> None:
    if verbose and not is_idempotent(c):
        print(f"  WARN: closure {c.id} is not idempotent; the lifted closure is not certified idempotent")


# ---------------------------------------------------------------------------
# Pointed endofunctors
# ---------------------------------------------------------------------------

def lift_pointed_qubase(b: QUBase, p: PointedEndo) -> QUBase:
    """U^{F,η}(m) = η⁻¹(U(η(m))) for U in the base at FX."""
    cat = p.category
    _require_on(b, cat, "pointed lift")
    bases = {}
    for x in cat.object_ids:
        eta = p.eta(x)
        img, pre = image_table(eta), preimage_table(eta)
        bases[x] = tuple(EndoMap(x, _freeze(pre[u.table[img]])) for u in b.at(eta.cod))
    return QUBase(cat, bases, f"{b.id}^{p.id}")


def lift_pointed_syntop(s: Syntop, p: PointedEndo) -> Syntop:
    """m ⊏ n iff η(m) ⊏_FX q and η⁻¹(q) ⊆ n for some q."""
    cat = p.category
    _require_on(s, cat, "pointed lift")
    if not p.e_pointed:
        if is_coperfect(s):
            lifted = syntop_of_qubase(lift_pointed_qubase(qubase_of_syntop(s), p))
            return Syntop(cat, lifted.families, f"{s.id}^{p.id}")
        bad = next(x for x in cat.object_ids if not p.eta(x).is_surjective)
        raise StructureError(
            f"unit of {p.id} is not surjective and {s.id} is not co-perfect",
            {"object": bad, "component": p.eta(bad).id},
        )
    families = {}
    for x in cat.object_ids:
        eta = p.eta(x)
        families[x] = tuple(TopogenousRel(x, _freeze(pull_relation(r.matrix, eta))) for r in s.at(eta.cod))
    return Syntop(cat, families, f"{s.id}^{p.id}")


def lift_pointed_closure(c: ClosureOp, p: PointedEndo, verbose: bool = False) -> ClosureOp:
    """c^{F,η}(m) = η⁻¹(c_FX(η(m)))."""
    cat = p.category
    _require_on(c, cat, "pointed lift")
    _warn_not_idempotent(c, verbose)
    maps = {}
    for x in cat.object_ids:
        eta = p.eta(x)
        img, pre = image_table(eta), preimage_table(eta)
        maps[x] = _freeze(pre[c.at(eta.cod)[img]])
    return ClosureOp(cat, maps, f"{c.id}^{p.id}")


# ---------------------------------------------------------------------------
# Copointed endofunctors
# ---------------------------------------------------------------------------

def _require_m_copointed(q: CopointedEndo) -> None:
    if not q.m_copointed:
        bad = next(x for x in q.category.object_ids if not q.epsilon(x).is_injective)
        raise StructureError(
            f"counit of {q.id} is not injective",
            {"object": bad, "component": q.epsilon(bad).id},
        )


def lift_copointed_syntop(s: Syntop, q: CopointedEndo) -> Syntop:
    """m ⊏ n iff m ⊆ n and ε⁻¹(m) ⊏_GX ε⁻¹(n)."""
    cat = q.category
    _require_on(s, cat, "copointed lift")
    _require_m_copointed(q)
    families = {}
    for x in cat.object_ids:
        eps = q.epsilon(x)
        pre = preimage_table(eps)
        sub = subset_matrix(cat.size(x))
        families[x] = tuple(
            TopogenousRel(x, _freeze(sub & r.matrix[np.ix_(pre, pre)])) for r in s.at(eps.dom)
        )
    return Syntop(cat, families, f"{s.id}^{q.id}")


def lift_copointed_qubase(b: QUBase, q: CopointedEndo) -> QUBase:
    """V^{G,ε}(m) = m ∪ ε(V(ε⁻¹(m)))."""
    cat = q.category
    _require_on(b, cat, "copointed lift")
    _require_m_copointed(q)
    bases = {}
    for x in cat.object_ids:
        eps = q.epsilon(x)
        img, pre = image_table(eps), preimage_table(eps)
        idx = subset_index(cat.size(x))
        bases[x] = tuple(EndoMap(x, _freeze(idx | img[v.table[pre]])) for v in b.at(eps.dom))
    return QUBase(cat, bases, f"{b.id}^{q.id}")


def lift_copointed_closure(c: ClosureOp, q: CopointedEndo, verbose: bool = False) -> ClosureOp:
    """c^{G,ε}(m) = m ∪ ε(c_GX(ε⁻¹(m)))."""
    cat = q.category
    _require_on(c, cat, "copointed lift")
    _require_m_copointed(q)
    _warn_not_idempotent(c, verbose)
    maps = {}
    for x in cat.object_ids:
        eps = q.epsilon(x)
        img, pre = image_table(eps), preimage_table(eps)
        maps[x] = _freeze(subset_index(cat.size(x)) | img[c.at(eps.dom)[pre]])
    return ClosureOp(cat, maps, f"{c.id}^{q.id}")


# ---------------------------------------------------------------------------
# Fibrations
# ---------------------------------------------------------------------------

def _gamma_delta(fd: FibrationData, x: str) -> tuple[np.ndarray, np.ndarray]:
    F = fd.functor
    if x not in fd.gamma or x not in fd.delta:
        raise InputError(f"fibration {fd.id} has no gamma/delta tables at {x}")
    gamma, delta = fd.gamma_table(x), fd.delta_table(x)
    if gamma.shape != (1 << F.source.size(x),) or delta.shape != (1 << F.target.size(F.on_obj(x)),):
        raise InputError(f"fibration {fd.id}: gamma/delta tables at {x} have the wrong length")
    return gamma, delta


def lift_fibration_syntop(s: Syntop, fd: FibrationData) -> Syntop:
    """m ⊏^F n iff γ(m) ⊏_FX γ(n)."""
    F = fd.functor
    _require_on(s, F.target, "fibration lift")
    families = {}
    for x in F.source.object_ids:
        gamma, _ = _gamma_delta(fd, x)
        families[x] = tuple(TopogenousRel(x, _freeze(r.matrix[np.ix_(gamma, gamma)])) for r in s.at(F.on_obj(x)))
    return Syntop(F.source, families, f"{s.id}^{fd.id}")


def lift_fibration_qubase(b: QUBase, fd: FibrationData) -> QUBase:
    """U^F(m) = δ(U(γ(m)))."""
    F = fd.functor
    _require_on(b, F.target, "fibration lift")
    bases = {}
    for x in F.source.object_ids:
        gamma, delta = _gamma_delta(fd, x)
        bases[x] = tuple(EndoMap(x, _freeze(delta[u.table[gamma]])) for u in b.at(F.on_obj(x)))
    return QUBase(F.source, bases, f"{b.id}^{fd.id}")


def lift_fibration_closure(c: ClosureOp, fd: FibrationData, verbose: bool = False) -> ClosureOp:
    """c^F(m) = δ(c_FX(γ(m)))."""
    F = fd.functor
    _require_on(c, F.target, "fibration lift")
    _warn_not_idempotent(c, verbose)
    maps = {}
    for x in F.source.object_ids:
        gamma, delta = _gamma_delta(fd, x)
        maps[x] = _freeze(delta[c.at(F.on_obj(x))[gamma]])
    return ClosureOp(F.source, maps, f"{c.id}^{fd.id}")


# ---------------------------------------------------------------------------
# Adjunctions
# ---------------------------------------------------------------------------

def _require_subobject_preservation(ad: AdjunctionData) -> None:
    for functor in (ad.left, ad.right):
        if not functor.preserves_subobjects:
            raise StructureError(f"functor {functor.id} is not flagged as preserving subobjects",
                                 {"functor": functor.id})
        rep = check_subobject_preservation(functor)
        if not rep.ok:
            raise StructureError(f"functor {functor.id} does not preserve subobjects",
                                 {"functor": functor.id, **(rep.failures[0].witness or {})})


def _adjoint_table(ad: AdjunctionData, x: str, u: np.ndarray) -> np.ndarray:
    """m ↦ η⁻¹(G(u(F(m)))) on sub X."""
    F, G = ad.left, ad.right
    fx = F.on_obj(x)
    fsub, gsub = F.subset_table(x), G.subset_table(fx)
    pre = preimage_table(ad.eta(x))
    return pre[gsub[u[fsub]]]


def lift_adjoint_qubase(b: QUBase, ad: AdjunctionData) -> QUBase:
    """U^η(m) = η⁻¹(G U(F m))."""
    F = ad.left
    _require_on(b, F.target, "adjoint lift")
    _require_subobject_preservation(ad)
    bases = {
        x: tuple(EndoMap(x, _freeze(_adjoint_table(ad, x, u.table))) for u in b.at(F.on_obj(x)))
        for x in F.source.object_ids
    }
    return QUBase(F.source, bases, f"{b.id}^{ad.id}")


def lift_adjoint_syntop(s: Syntop, ad: AdjunctionData) -> Syntop:
    """m ⊏^η n iff η⁻¹(G U^⊏(F m)) ⊆ n."""
    _require_on(s, ad.left.target, "adjoint lift")
    if not is_coperfect(s):
        raise StructureError(f"adjoint lift needs a co-perfect structure, {s.id} is not",
                             coperfect_witness(s))
    lifted = syntop_of_qubase(lift_adjoint_qubase(qubase_of_syntop(s), ad))
    return Syntop(lifted.category, lifted.families, f"{s.id}^{ad.id}")


def lift_adjoint_closure(c: ClosureOp, ad: AdjunctionData, verbose: bool = False) -> ClosureOp:
    """c^η(m) = η⁻¹(G c_FX(F m))."""
    F = ad.left
    _require_on(c, F.target, "adjoint lift")
    _require_subobject_preservation(ad)
    _warn_not_idempotent(c, verbose)
    maps = {x: _freeze(_adjoint_table(ad, x, c.at(F.on_obj(x)))) for x in F.source.object_ids}
    return ClosureOp(F.source, maps, f"{c.id}^{ad.id}")


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

Preservation = tuple[str, Callable[[Structure], bool], Callable[[Structure], bool]]

_ALWAYS = lambda s: True  # noqa: E731

_INTERPOLATIVE: Preservation = ("interpolative", is_interpolative, is_interpolative)
_COPERFECT:     Preservation = ("co-perfect", is_coperfect, is_coperfect)
_TRANSITIVE:    Preservation = ("transitive", is_transitive_base, is_transitive_base)
_IDEMPOTENT:    Preservation = ("idempotent", is_idempotent, is_idempotent)


@dataclass(frozen=True)
class LiftSpec:
    family: str
    repr: str
    formula: str
    direction: str
    claim: str
    lift: Callable[..., Structure]
    preserves: tuple[Preservation, ...] = field(default_factory=tuple)


LIFTS: dict[tuple[str, str], LiftSpec] = {
    (Family.POINTED, Kind.SYNTOP): LiftSpec(
        Family.POINTED, Kind.SYNTOP,
        "m ⊏^{F,η} n  iff  η(m) ⊏_FX p and η⁻¹(p) <= n for some p",
        Direction.COARSEST,
        "coarsest syntopogenous structure making every η_X (lifted, S)-continuous",
        lift_pointed_syntop, (_INTERPOLATIVE, _COPERFECT),
    ),
    (Family.POINTED, Kind.QUBASE): LiftSpec(
        Family.POINTED, Kind.QUBASE,
        "U^{F,η}(m) = η⁻¹(U(η(m)))",
        Direction.COARSEST,
        "coarsest quasi-uniformity making every η_X (lifted, U)-continuous",
        lift_pointed_qubase, (_TRANSITIVE,),
    ),
    (Family.POINTED, Kind.CLOSURE): LiftSpec(
        Family.POINTED, Kind.CLOSURE,
        "c^{F,η}(m) = η⁻¹(c_FX(η(m)))",
        Direction.LARGEST,
        "largest closure operator making every η_X (lifted, c)-continuous",
        lift_pointed_closure, (_IDEMPOTENT,),
    ),
    (Family.COPOINTED, Kind.SYNTOP): LiftSpec(
        Family.COPOINTED, Kind.SYNTOP,
        "m ⊏^{G,ε} n  iff  m <= n and ε⁻¹(m) ⊏_GX ε⁻¹(n)",
        Direction.FINEST,
        "finest syntopogenous structure making every ε_X (S, lifted)-continuous",
        lift_copointed_syntop, (_INTERPOLATIVE, _COPERFECT),
    ),
    (Family.COPOINTED, Kind.QUBASE): LiftSpec(
        Family.COPOINTED, Kind.QUBASE,
        "V^{G,ε}(m) = m ∨ ε(V(ε⁻¹(m)))",
        Direction.FINEST,
        "finest quasi-uniformity making every ε_X (V, lifted)-continuous",
        lift_copointed_qubase, (_TRANSITIVE,),
    ),
    (Family.COPOINTED, Kind.CLOSURE): LiftSpec(
        Family.COPOINTED, Kind.CLOSURE,
        "c^{G,ε}(m) = m ∨ ε(c_GX(ε⁻¹(m)))",
        Direction.LEAST,
        "least closure operator making every ε_X (c, lifted)-continuous",
        lift_copointed_closure, (_IDEMPOTENT,),
    ),
    (Family.FIBRATION, Kind.SYNTOP): LiftSpec(
        Family.FIBRATION, Kind.SYNTOP,
        "m ⊏^F n  iff  Fm ⊏_FX γ(n)",
        Direction.COARSEST,
        "coarsest syntopogenous structure making F (lifted, S)-continuous",
        lift_fibration_syntop, (_INTERPOLATIVE, _COPERFECT),
    ),
    (Family.FIBRATION, Kind.QUBASE): LiftSpec(
        Family.FIBRATION, Kind.QUBASE,
        "U^F(m) = δ(U(Fm))",
        Direction.COARSEST,
        "coarsest quasi-uniformity making F (lifted, U)-continuous",
        lift_fibration_qubase, (_TRANSITIVE,),
    ),
    (Family.FIBRATION, Kind.CLOSURE): LiftSpec(
        Family.FIBRATION, Kind.CLOSURE,
        "c^F(m) = δ(c_FX(Fm))",
        Direction.LARGEST,
        "largest closure operator making F (lifted, c)-continuous",
        lift_fibration_closure, (_IDEMPOTENT,),
    ),
    (Family.ADJOINT, Kind.SYNTOP): LiftSpec(
        Family.ADJOINT, Kind.SYNTOP,
        "m ⊏^η n  iff  η⁻¹(G U^⊏(Fm)) <= n",
        Direction.COARSEST,
        "coarsest syntopogenous structure making F (lifted, S)-continuous",
        lift_adjoint_syntop, (("co-perfect", _ALWAYS, is_coperfect),),
    ),
    (Family.ADJOINT, Kind.QUBASE): LiftSpec(
        Family.ADJOINT, Kind.QUBASE,
        "U^η(m) = η⁻¹(G U(Fm))",
        Direction.COARSEST,
        "coarsest quasi-uniformity making F (lifted, U)-continuous",
        lift_adjoint_qubase, (),
    ),
    (Family.ADJOINT, Kind.CLOSURE): LiftSpec(
        Family.ADJOINT, Kind.CLOSURE,
        "c^η(m) = η⁻¹(G c_FX(Fm))",
        Direction.LARGEST,
        "largest closure operator making F (lifted, c)-continuous",
        lift_adjoint_closure, (_IDEMPOTENT,),
    ),
}


def lift_spec(family: str, repr: str) -> LiftSpec:
    try:
        return LIFTS[(family, repr)]
    except KeyError:
        raise InputError(f"no lift for family {family!r} in representation {repr!r}") from None


def lift(family: str, structure: Structure, transform: Transform, verbose: bool = False) -> Structure:
    spec = lift_spec(family, structure.kind)
    if structure.kind == Kind.CLOSURE:
        return spec.lift(structure, transform, verbose=verbose)
    return spec.lift(structure, transform)


# ---------------------------------------------------------------------------
# Where structures live, and which maps must be continuous
# ---------------------------------------------------------------------------

def lifted_category(family: str, transform: Transform) -> FinCategory:
    if family in (Family.POINTED, Family.COPOINTED):
        return transform.category
    if family == Family.FIBRATION:
        return transform.functor.source
    return transform.left.source


def base_category(family: str, transform: Transform) -> FinCategory:
    if family in (Family.POINTED, Family.COPOINTED):
        return transform.category
    if family == Family.FIBRATION:
        return transform.functor.target
    return transform.left.target


def continuity_predicate(family: str, transform: Transform, base: Structure) -> Callable[[Structure], bool]:
    """Does a candidate on the lifted side make the designated maps continuous?"""
    if family == Family.POINTED:
        cat = transform.category
        return lambda cand: all(morphism_continuity(transform.eta(x), cand, base) for x in cat.object_ids)
    if family == Family.COPOINTED:
        cat = transform.category
        return lambda cand: all(morphism_continuity(transform.epsilon(x), base, cand) for x in cat.object_ids)
    functor = transform.functor if family == Family.FIBRATION else transform.left
    return lambda cand: functor_continuity(functor, cand, base)


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

@dataclass
class LiftResult:
    spec: LiftSpec
    base: Structure
    lifted: Structure
    report: Report
    certificates: list[Certificate] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.report.ok and all(c.ok for c in self.certificates)


def certify_lift(family: str, base: Structure, transform: Transform, *,
                 seeds: tuple[Structure, ...] = (),
                 cap: int | None = None, force: bool = False,
                 seed: int = DEFAULT_SEED, n_candidates: int = DEFAULT_CANDIDATES,
                 lifted: Structure | None = None,
                 extremal: bool = True,
                 verbose: bool = False) -> LiftResult:
    """
    Lift `base` (unless `lifted` is supplied) and check every claim attached
    to the lift: validity, continuity of the designated maps, preserved
    properties and the extremal property against a candidate family.
    With extremal=False the candidate scan is skipped.
    """
    spec = lift_spec(family, base.kind)
    if lifted is None:
        lifted = lift(family, base, transform, verbose=verbose)
    target = lifted_category(family, transform)

    rep = Report(f"{family} lift of {base.kind} {base.id}")
    rep.note(f"formula: {spec.formula}")
    rep.note(f"claim: {spec.claim}")
    rep.extend(validate(lifted), prefix="lifted")

    continuous = continuity_predicate(family, transform, base)
    rep.record("designated maps continuous", continuous(lifted), {"lifted": lifted.id})

    for label, holds_in, holds_out in spec.preserves:
        if holds_in(base):
            rep.record(f"preserves {label}", holds_out(lifted), {"lifted": lifted.id})
        else:
            rep.note(f"input is not {label}: preservation not asserted")

    if family == Family.FIBRATION and base.kind in (Kind.QUBASE, Kind.SYNTOP):
        F = transform.functor
        bad = None
        for mid in sorted(transform.initial):
            f = F.source.mor(mid)
            if is_initial(F.on_mor(f), base) and not is_initial(f, lifted):
                bad = {"morphism": mid}
                break
        rep.record("initial morphisms transfer", bad is None, bad)

    if not extremal:
        rep.note("extremal claim not checked")
        return LiftResult(spec, base, lifted, rep)

    coperfect_only = family == Family.ADJOINT and base.kind == Kind.SYNTOP
    candidates, mode = oracle.candidate_family(
        lifted.kind, target, lifted,
        seeds=(lifted, *seeds, *((base,) if base.category.id == target.id else ())),
        cap=cap, force=force, seed=seed, n=n_candidates, coperfect=coperfect_only,
    )
    if verbose:
        print(f"  {len(candidates)} {mode} candidates on {target.id}")
    cert = oracle.certify_extremal(
        lifted, candidates, continuous, spec.direction,
        subject=f"{spec.direction} {lifted.kind} for the {family} lift", mode=mode, seed=seed,
    )
    certificates = [cert]
    rep.record(f"universal property ({spec.direction})", cert.ok, cert.counterexample)

    if family == Family.FIBRATION and base.kind == Kind.QUBASE:
        F = transform.functor
        hit = {F.on_obj(x) for x in F.source.object_ids}
        if all(y in hit for y in F.target.object_ids):
            on_c, mode_c = oracle.candidate_family(
                Kind.QUBASE, F.target, base, seeds=(base,),
                cap=cap, force=force, seed=seed, n=n_candidates,
            )
            finest = oracle.certify_extremal(
                base, on_c, lambda cand: functor_continuity(F, lifted, cand), Direction.FINEST,
                subject="input base is the finest on the base category making F continuous",
                mode=mode_c, seed=seed,
            )
            certificates.append(finest)
            rep.record("input base finest making F continuous", finest.ok, finest.counterexample)
        else:
            rep.note("F is not surjective on objects: finest-on-target claim not checked")

    return LiftResult(spec, base, lifted, rep, certificates)
