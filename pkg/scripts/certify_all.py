"""
scripts/certify_all.py

Acceptance sweep over the micro instances.  Eight steps, each one a batch of
checks collected into a Report:

    [1/8] closure <-> topogenous order round trips
    [2/8] principal base <-> co-perfect structure round trips, principality
    [3/8] pointed lift through the T0 reflection, every space on <= 3 points,
          and agreement with the adjoint lift through T0-incl
    [4/8] copointed lift through symmetrization, every preorder on <= 3 points
    [5/8] fibration lift along the carrier functor
    [6/8] adjoint lift through specialization -| Alexandrov
    [7/8] the continuity checkers agree across representations
    [8/8] same seed, same bytes

Run:
    python scripts/certify_all.py
    python scripts/certify_all.py --seed 0x5EED --candidates 50 --quiet

Exit code 0 when every step passes, 1 otherwise.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
import traceback
from dataclasses import replace
from itertools import product
from typing import Callable

# ── path fix so imports resolve from the repo root ────────────────────────────
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from catalog.builders import (
    alexandrov_adjunction,
    build_finset_category,
    build_fintop_category,
    endomap_from_preorder,
    entourage_qubase,
    forgetful_fibration,
    kuratowski_closure,
    symmetrization,
    t0_reflection,
)
from catalog.bundled import point, sierpinski_space, t0_bundle, three_point_space
from catalog.spaces import FinTopSpace, enumerate_preorders, enumerate_topologies
from config import DEFAULT_CANDIDATES, DEFAULT_SEED, FORCED_ENUM_CARRIER
from engine import oracle
from engine.fincat import FinCategory, FinMorphism, FinObject, bits, mask_of
from engine.galois import (
    qubase_of_closure,
    round_trip_report,
    syntop_of_closure,
    syntop_of_qubase,
    topogenous_of_closure,
)
from engine.lifting import Family, certify_lift, lift
from engine.reports import Report
from engine.structures import (
    Order,
    QUBase,
    compare,
    is_idempotent,
    morphism_continuity,
)
from store.codec import dumps

STEPS = 8


# ---------------------------------------------------------------------------
# Micro categories
# ---------------------------------------------------------------------------

def single_object(n: int, twist: bool = False) -> FinCategory:
    """One object on n points with its identity (and the swap, when n == 2 and twist)."""
    labels = tuple(str(i) for i in range(n))
    morphisms = [FinMorphism("1_X", "X", "X", tuple(range(n)), n)]
    if twist:
        morphisms.append(FinMorphism("s", "X", "X", (1, 0), 2))
    cid = f"X{n}" + ("+s" if twist else "")
    return FinCategory(cid, (FinObject("X", labels),), tuple(morphisms))


def micro_categories() -> list[FinCategory]:
    return [
        single_object(0),
        single_object(1),
        single_object(2),
        single_object(2, twist=True),
        build_finset_category({"n1": 1, "n2": 2}),
        build_fintop_category([point(), sierpinski_space()]).category,
    ]


def spaces_up_to(n: int) -> list[FinTopSpace]:
    return [s for k in range(1, n + 1) for s in enumerate_topologies(k)]


def _absorb(rep: Report, sub: Report, prefix: str) -> None:
    """Keep the failures of `sub` and count the rest."""
    if sub.ok:
        rep.record(prefix, True)
    else:
        rep.extend(Report(sub.subject, sub.failures), prefix=prefix)


# ---------------------------------------------------------------------------
# Steps
# ---------------------------------------------------------------------------

def check_closure_orders(verbose: bool = False) -> Report:
    rep = Report("closure <-> topogenous order")
    for cat in micro_categories():
        closures = list(oracle.enumerate_closures(cat))
        orders = list(oracle.enumerate_topogenous(cat, meet_preserving=True))
        rep.record(f"{cat.id}: as many meet-preserving orders as closures",
                   len(closures) == len(orders), {"closures": len(closures), "orders": len(orders)})
        for s in (*closures, *orders):
            _absorb(rep, round_trip_report(s), f"{cat.id}/{s.id}")
        if verbose:
            print(f"  {cat.id}: {len(closures)} closures, {len(orders)} meet-preserving orders")
    return rep


def check_principal_bases(verbose: bool = False) -> Report:
    rep = Report("principal base <-> co-perfect structure")
    for cat in micro_categories():
        bases = list(oracle.enumerate_principal_qubases(cat))
        structures = list(oracle.enumerate_simple_syntops(cat, coperfect=True))
        idempotent = list(oracle.enumerate_closures(cat, idempotent=True))
        rep.record(f"{cat.id}: principal bases match idempotent closures",
                   len(bases) == len(idempotent), {"bases": len(bases), "idempotent": len(idempotent)})
        for s in (*bases, *structures):
            _absorb(rep, round_trip_report(s), f"{cat.id}/{s.id}")
        if verbose:
            print(f"  {cat.id}: {len(bases)} principal bases, {len(structures)} simple co-perfect structures")

    for cat in (single_object(2), single_object(2, twist=True)):
        found = 0
        for b in oracle.enumerate_qubases(cat):
            _absorb(rep, oracle.principality_check(b), f"{cat.id}/{b.id} principal")
            found += 1
        if verbose:
            print(f"  {cat.id}: {found} bases scanned for principality")
    return rep


def _reflected(space: FinTopSpace, m: int) -> int:
    """η⁻¹(cl(η(m))) computed on the spaces themselves."""
    q, table = space.quotient()
    c = q.closure(mask_of(table[i] for i in bits(m)))
    return mask_of(i for i in range(space.size) if c >> table[i] & 1)


def check_pointed(seed: int, n_candidates: int, verbose: bool = False) -> Report:
    rep = Report("pointed lift through the T0 reflection")
    three = list(enumerate_topologies(3))
    rep.record("29 topologies on three points", len(three) == 29, {"found": len(three)})
    rep.record("29 preorders on three points", len(list(enumerate_preorders(3))) == 29)
    rep.record("specialization is a bijection at three points",
               len({s.specialization().key for s in three}) == 29)

    for space in [three_point_space(), *spaces_up_to(3)]:
        sc, p = t0_reflection([space])
        cl = kuratowski_closure(sc)
        res = certify_lift(Family.POINTED, cl, p, seed=seed, n_candidates=n_candidates)
        _absorb(rep, res.report, f"{space.name} closure")

        bad = None
        for x in sc.category.object_ids:
            s = sc.space(x)
            lifted = res.lifted.at(x)
            for m in range(1 << s.size):
                if int(lifted[m]) != _reflected(s, m) or int(lifted[m]) != s.closure(m):
                    bad = {"object": x, "m": m}
                    break
            if bad:
                break
        rep.record(f"{space.name}: lifted closure is η⁻¹(cl(η(·))) and the Kuratowski closure", bad is None, bad)

        order = syntop_of_closure(cl)
        res_s = certify_lift(Family.POINTED, order, p, seed=seed, n_candidates=n_candidates)
        _absorb(rep, res_s.report, f"{space.name} order")
        bad = None
        for x in sc.category.object_ids:
            s = sc.space(x)
            union = res_s.lifted.union(x)
            for a, b in product(range(1 << s.size), repeat=2):
                if bool(union[a, b]) != (_reflected(s, a) & ~b == 0):
                    bad = {"object": x, "A": a, "B": b}
                    break
            if bad:
                break
        rep.record(f"{space.name}: A ⊏ B iff η⁻¹(cl(η(A))) <= B", bad is None, bad)
        if verbose:
            print(f"  {space.name}: {'ok' if res.ok and res_s.ok else 'FAIL'}"
                  f" ({res.certificates[0].mode}, {len(res.certificates[0].entries)} candidates)")

    # the reflector -| inclusion adjunction lifts the T0 closure to the same structure
    t0 = t0_bundle()
    p, ad = t0.transform(Family.POINTED), t0.transform(Family.ADJOINT)
    cl, cl0 = t0.structure("cl"), t0.structure("cl0")
    pointed = lift(Family.POINTED, cl, p)
    verdicts = {
        "adjoint closure": compare(lift(Family.ADJOINT, cl0, ad), pointed),
        "pointed base": compare(lift(Family.POINTED, qubase_of_closure(cl), p), qubase_of_closure(pointed)),
        "adjoint base": compare(lift(Family.ADJOINT, qubase_of_closure(cl0), ad), qubase_of_closure(pointed)),
        "adjoint structure": compare(lift(Family.ADJOINT, syntop_of_closure(cl0), ad), syntop_of_closure(pointed)),
    }
    rep.record("T0: reflection and adjunction lifts agree",
               all(v == Order.EQUAL for v in verdicts.values()), verdicts)
    return rep


def check_copointed(seed: int, n_candidates: int, verbose: bool = False) -> Report:
    rep = Report("copointed lift through symmetrization")
    for n in (1, 2, 3):
        for p in enumerate_preorders(n):
            pc, q = symmetrization([p])
            base = entourage_qubase(pc)
            res = certify_lift(Family.COPOINTED, base, q, seed=seed, n_candidates=n_candidates)
            _absorb(rep, res.report, p.name)
            expected = QUBase(
                pc.category,
                {x: (endomap_from_preorder(pc.preorder(x).symmetric_part(), x),) for x in pc.category.object_ids},
                "U_sym",
            )
            verdict = compare(res.lifted, expected)
            rep.record(f"{p.name}: lifted base generates U of R ∩ R⁻¹", verdict == Order.EQUAL, {"order": verdict})
            if verbose:
                print(f"  {p.name}: {'ok' if res.ok and verdict == Order.EQUAL else 'FAIL'}")
    return rep


def check_fibration(seed: int, n_candidates: int, verbose: bool = False) -> Report:
    rep = Report("fibration lift along the carrier functor")

    sc, sets, fd = forgetful_fibration(spaces_up_to(2))
    inputs = [
        *oracle.enumerate_closures(sets),
        *oracle.enumerate_principal_qubases(sets),
        *oracle.enumerate_simple_syntops(sets),
    ]
    for s in inputs:
        res = certify_lift(Family.FIBRATION, s, fd, seed=seed, n_candidates=n_candidates)
        _absorb(rep, res.report, f"<=2 points {s.kind} {s.id}")
    if verbose:
        print(f"  <= 2 points: {len(sc.category.objects)} spaces, {len(inputs)} inputs on {sets.id}")

    # carrier 3: every closure and principal base, and the simple co-perfect
    # structures as images of the idempotent closures
    sc, sets, fd = forgetful_fibration(spaces_up_to(3))
    forced = {"cap": FORCED_ENUM_CARRIER, "force": True}
    inputs = [
        *oracle.enumerate_closures(sets, **forced),
        *oracle.enumerate_principal_qubases(sets, **forced),
        *(replace(syntop_of_closure(c), id=f"s#{k}")
          for k, c in enumerate(oracle.enumerate_closures(sets, idempotent=True, **forced))),
    ]
    for s in inputs:
        res = certify_lift(Family.FIBRATION, s, fd, extremal=False)
        _absorb(rep, res.report, f"<=3 points {s.kind} {s.id}")
    if verbose:
        print(f"  <= 3 points: {len(sc.category.objects)} spaces, {len(inputs)} inputs, {len(fd.initial)} initial morphisms")
    return rep


def check_adjoint(seed: int, n_candidates: int, verbose: bool = False) -> Report:
    rep = Report("adjoint lift through specialization -| Alexandrov")
    for space in spaces_up_to(3):
        sc, pc, ad = alexandrov_adjunction([space])
        base = syntop_of_qubase(entourage_qubase(pc))
        res = certify_lift(Family.ADJOINT, base, ad, seed=seed, n_candidates=n_candidates)
        _absorb(rep, res.report, space.name)

        bad = None
        for x in sc.category.object_ids:
            s = sc.space(x)
            union = res.lifted.union(x)
            for a, b in product(range(1 << s.size), repeat=2):
                between = any(a & ~o == 0 and o & ~b == 0 for o in s.opens)
                if bool(union[a, b]) != between:
                    bad = {"object": x, "A": a, "B": b}
                    break
            if bad:
                break
        rep.record(f"{space.name}: A ⊏ B iff some open lies between them", bad is None, bad)
        if verbose:
            print(f"  {space.name}: {'ok' if res.ok and bad is None else 'FAIL'}")
    return rep


def check_continuity(verbose: bool = False) -> Report:
    rep = Report("continuity across representations")
    for cat in micro_categories():
        closures = list(oracle.enumerate_closures(cat))
        images = {c.id: (topogenous_of_closure(c), syntop_of_closure(c) if is_idempotent(c) else None,
                         qubase_of_closure(c) if is_idempotent(c) else None) for c in closures}
        bad = None
        for c, d in product(closures, repeat=2):
            tc, sc_, bc = images[c.id]
            td, sd, bd = images[d.id]
            for f in cat.morphisms:
                verdicts = [morphism_continuity(f, c, d), morphism_continuity(f, tc, td)]
                if sc_ is not None and sd is not None:
                    verdicts += [morphism_continuity(f, sc_, sd), morphism_continuity(f, bc, bd)]
                if len(set(verdicts)) != 1:
                    bad = {"morphism": f.id, "c": c.id, "d": d.id, "verdicts": verdicts}
                    break
            if bad:
                break
        rep.record(f"{cat.id}: checkers agree on {len(closures) ** 2} pairs", bad is None, bad)
        if verbose:
            print(f"  {cat.id}: {len(closures) ** 2} pairs x {len(cat.morphisms)} morphisms")
    return rep


def check_determinism(seed: int, n_candidates: int, verbose: bool = False) -> Report:
    rep = Report("determinism")
    b = t0_bundle()
    p = b.transform(Family.POINTED)
    cl = b.structure("cl")

    def once() -> str:
        res = certify_lift(Family.POINTED, cl, p, seed=seed, n_candidates=n_candidates)
        return dumps({
            "report":       res.report.to_dict(),
            "certificates": [c.to_dict() for c in res.certificates],
        })

    first, second = once(), once()
    rep.record("pointed certification is byte-identical", first == second)

    base = b.structure("U_R")
    digests = [
        [oracle.structure_digest(s) for s in oracle.adversarial_candidates(base, n=n_candidates, seed=seed)]
        for _ in range(2)
    ]
    rep.record("adversarial candidates repeat", digests[0] == digests[1], {"candidates": len(digests[0])})
    if verbose:
        print(f"  {len(first)} bytes of report, {len(digests[0])} adversarial bases")
    return rep


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------

def run_sweep(seed: int = DEFAULT_SEED, n_candidates: int = DEFAULT_CANDIDATES,
              verbose: bool = True) -> tuple[str, list[str]]:
    steps: list[tuple[str, Callable[[], Report]]] = [
        ("galois",      lambda: check_closure_orders(verbose)),
        ("bases",       lambda: check_principal_bases(verbose)),
        ("pointed",     lambda: check_pointed(seed, n_candidates, verbose)),
        ("copointed",   lambda: check_copointed(seed, n_candidates, verbose)),
        ("fibration",   lambda: check_fibration(seed, n_candidates, verbose)),
        ("adjoint",     lambda: check_adjoint(seed, n_candidates, verbose)),
        ("continuity",  lambda: check_continuity(verbose)),
        ("determinism", lambda: check_determinism(seed, n_candidates, verbose)),
    ]

    print(f"\n{'='*60}")
    print(f"Acceptance sweep  seed={seed:#x}  candidates={n_candidates}")
    print(f"{'='*60}")

    errors: list[str] = []
    for k, (name, step) in enumerate(steps, start=1):
        print(f"\n[{k}/{STEPS}] {name} …")
        started = time.perf_counter()
        try:
            rep = step()
        except Exception as exc:
            errors.append(f"{name}: {exc}")
            print(f"  ERROR in {name}: {exc}")
            if verbose:
                traceback.print_exc()
            continue
        took = time.perf_counter() - started
        print(f"  → {len(rep.checks)} checks, {len(rep.failures)} failed, {took:.1f}s")
        if not rep.ok:
            errors.append(f"{name}: {len(rep.failures)} failed checks")
            for line in rep.lines():
                if "FAIL" in line or "witness" in line:
                    print(f"  {line}")

    status = "partial" if errors else "success"
    print(f"\n{'='*60}")
    print(f"Sweep complete — status: {status}")
    if errors:
        print(f"  ERRORS: {'; '.join(errors)}")
    print(f"{'='*60}\n")
    return status, errors


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="Acceptance sweep over the micro instances")
    parser.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED,
                        help=f"Seed for adversarial candidates (default: {DEFAULT_SEED:#x})")
    parser.add_argument("--candidates", type=int, default=DEFAULT_CANDIDATES,
                        help=f"Adversarial candidates per certificate (default: {DEFAULT_CANDIDATES})")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    status, _ = run_sweep(seed=args.seed, n_candidates=args.candidates, verbose=not args.quiet)
    return 0 if status == "success" else 1


if __name__ == "__main__":
    sys.exit(main())
