"""
scripts/qulab.py

Batch front end of the lab: load an instance file, run validators,
correspondences, lifts and oracle scans, print tables and write canonical
JSON reports.

Usage
-----
    python scripts/qulab.py examples t0 --out t0.json
    python scripts/qulab.py validate --in t0.json
    python scripts/qulab.py galois --in t0.json
    python scripts/qulab.py lift pointed --repr closure --in t0.json --out lifted.json
    python scripts/qulab.py oracle enumerate --kind closure --in sierpinski.json
    python scripts/qulab.py oracle certify --direction coarsest --family adjoint --repr syntop --in alexandrov.json
    python scripts/qulab.py oracle principality --in sym.json
    python scripts/qulab.py continuity --in t0.json --a cl --b cl

Exit codes: 0 every check passed, 1 a mathematical check failed (the report
carries the counterexample), 2 input or usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Sequence

# ── path fix so imports resolve from the repo root ────────────────────────────
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import pandas as pd

from catalog import bundled
from config import DEFAULT_CANDIDATES, DEFAULT_SEED, ENUM_CARRIER
from engine import oracle
from engine.fincat import FinCategory, InputError, StructureError
from engine.galois import round_trip_report
from engine.lifting import Family, REPRS, base_category, certify_lift, continuity_predicate, lift, lift_spec, lifted_category
from engine.oracle import Direction, principality_check
from engine.reports import Report
from engine.structures import (
    ClosureOp,
    Kind,
    QUBase,
    Structure,
    TopogenousOrder,
    functor_continuity,
    morphism_continuity,
    row_meets,
    validate,
)
from store import codec
from store.bundle import Bundle, check_bundle

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

ENUMERABLE = {
    "closure":         lambda cat, a: oracle.enumerate_closures(cat, a.max_carrier, a.force),
    "idempotent":      lambda cat, a: oracle.enumerate_closures(cat, a.max_carrier, a.force, idempotent=True),
    "topogenous":      lambda cat, a: oracle.enumerate_topogenous(cat, a.max_carrier, a.force),
    "meet-preserving": lambda cat, a: oracle.enumerate_topogenous(cat, a.max_carrier, a.force, meet_preserving=True),
    "interpolative":   lambda cat, a: oracle.enumerate_topogenous(cat, a.max_carrier, a.force, interpolative=True),
    "qubase":          lambda cat, a: oracle.enumerate_qubases(cat, a.max_carrier, a.force),
    "principal":       lambda cat, a: oracle.enumerate_principal_qubases(cat, a.max_carrier, a.force),
    "syntop":          lambda cat, a: oracle.enumerate_simple_syntops(cat, a.max_carrier, a.force),
    "coperfect":       lambda cat, a: oracle.enumerate_simple_syntops(cat, a.max_carrier, a.force, coperfect=True),
}


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

def structure_frame(s: Structure, x: str) -> pd.DataFrame:
    """One row per subset m of X, subsets rendered as label sets."""
    obj = s.category.obj(x)
    subsets = range(1 << obj.size)
    data: dict[str, list[str]] = {"m": [obj.render(m) for m in subsets]}
    if isinstance(s, ClosureOp):
        data[f"{s.id}(m)"] = [obj.render(int(v)) for v in s.at(x)]
    elif isinstance(s, QUBase):
        for k, u in enumerate(s.at(x)):
            data[f"U{k}(m)"] = [obj.render(int(v)) for v in u.table]
    else:
        rels = [s.at(x)] if isinstance(s, TopogenousOrder) else [r.matrix for r in s.at(x)]
        for k, rel in enumerate(rels):
            meets = row_meets(rel)
            data[f"#n ({k})"] = [str(int(rel[m].sum())) for m in subsets]
            data[f"least n ({k})"] = [obj.render(int(meets[m])) if rel[m, meets[m]] else "-" for m in subsets]
    return pd.DataFrame(data)


def print_structure(s: Structure) -> None:
    print(f"── {s.kind} {s.id} on {s.category.id} " + "─" * 20)
    for x in s.category.object_ids:
        print(f"  object {x} {s.category.obj(x).render(s.category.obj(x).top)}")
        print(structure_frame(s, x).to_string(index=False))
    print()


def print_report(rep: Report) -> None:
    for line in rep.lines():
        print(line)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _load(args) -> Bundle:
    if not args.input:
        raise InputError("--in is required")
    return codec.load(args.input)


def _pick(bundle: Bundle, kind: str, cat: FinCategory, sid: str | None) -> Structure:
    if sid:
        s = bundle.structure(sid)
        if s.kind != kind:
            raise InputError(f"structure {sid} is a {s.kind}, not a {kind}")
        return s
    found = bundle.structures_of(kind, cat.id)
    if not found:
        raise InputError(f"no {kind} structure on {cat.id} in {bundle.id}")
    if len(found) > 1:
        print(f"  note: {len(found)} {kind} structures on {cat.id}, using {found[0].id} (pick with --structure)")
    return found[0]


def _emit(payload: dict, path: str | None) -> None:
    if path:
        codec.write(codec.dumps(payload), path)
        print(f"  report written to {path}")


def _status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FAILED


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    bundle = _load(args)
    shape, axioms = check_bundle(bundle)
    print_report(shape)
    print_report(axioms)
    _emit({"instance": shape.to_dict(), "structures": axioms.to_dict()}, args.out)
    if not shape.ok:
        return EXIT_INPUT
    return _status(axioms.ok)


def cmd_galois(args) -> int:
    bundle = _load(args)
    ids = [args.structure] if args.structure else sorted(bundle.structures)
    reports = []
    for sid in ids:
        rep = round_trip_report(bundle.structure(sid))
        print_report(rep)
        reports.append(rep)
    _emit({"reports": [r.to_dict() for r in reports]}, args.out)
    return _status(all(r.ok for r in reports))


def cmd_lift(args) -> int:
    bundle = _load(args)
    transform = bundle.transform(args.family, args.transform)
    base = _pick(bundle, args.repr, base_category(args.family, transform), args.structure)

    print("=" * 60)
    print(f"{args.family} lift of {base.kind} {base.id} along {transform.id}")
    print("=" * 60)
    result = certify_lift(
        args.family, base, transform,
        cap=args.max_carrier, force=args.force, seed=args.seed,
        n_candidates=args.candidates, verbose=args.verbose,
    )
    print_structure(result.lifted)
    print_report(result.report)
    for cert in result.certificates:
        for line in cert.lines():
            print(line)

    if args.out:
        codec.write(codec.dumps(codec.structure_file(result.lifted)), args.out)
        print(f"  lifted structure written to {args.out}")
    _emit({
        "report": result.report.to_dict(),
        "certificates": [c.to_dict() for c in result.certificates],
    }, args.report)
    return _status(result.ok)


def cmd_oracle_enumerate(args) -> int:
    bundle = _load(args)
    cat = bundle.category(args.category)
    found = list(ENUMERABLE[args.kind](cat, args))
    rows = [
        {"index": k, "id": s.id, "valid": validate(s).ok, "digest": oracle.structure_digest(s)[:12]}
        for k, s in enumerate(found)
    ]
    print(f"{len(found)} {args.kind} structures on {cat.id}")
    if rows and args.verbose:
        print(pd.DataFrame(rows).to_string(index=False))
    _emit({"category": cat.id, "kind": args.kind, "count": len(found),
           "digests": [oracle.structure_digest(s) for s in found]}, args.out)
    return _status(all(r["valid"] for r in rows))


def cmd_oracle_certify(args) -> int:
    bundle = _load(args)
    transform = bundle.transform(args.family, args.transform)
    base = _pick(bundle, args.repr, base_category(args.family, transform), args.structure)
    spec = lift_spec(args.family, args.repr)
    direction = args.direction or spec.direction

    lifted = lift(args.family, base, transform, verbose=args.verbose)
    target = lifted_category(args.family, transform)
    candidates, mode = oracle.candidate_family(
        lifted.kind, target, lifted,
        seeds=(lifted,), cap=args.max_carrier, force=args.force,
        seed=args.seed, n=args.candidates,
        coperfect=args.family == Family.ADJOINT and args.repr == Kind.SYNTOP,
    )
    cert = oracle.certify_extremal(
        lifted, candidates, continuity_predicate(args.family, transform, base), direction,
        subject=f"{direction} {lifted.kind} for the {args.family} lift of {base.id}",
        mode=mode, seed=args.seed,
    )
    for line in cert.lines():
        print(line)
    _emit(cert.to_dict(), args.out)
    return _status(cert.ok)


def cmd_oracle_principality(args) -> int:
    bundle = _load(args)
    if args.structure:
        bases = [bundle.structure(args.structure)]
    else:
        bases = bundle.structures_of(Kind.QUBASE)
    if not bases:
        raise InputError(f"no base in {bundle.id}")
    reports = []
    for b in bases:
        if not isinstance(b, QUBase):
            raise InputError(f"{b.id} is a {b.kind}, principality needs a base")
        rep = principality_check(b)
        print_report(rep)
        reports.append(rep)
    _emit({"reports": [r.to_dict() for r in reports]}, args.out)
    return _status(all(r.ok for r in reports))


def cmd_examples(args) -> int:
    bundle = bundled.bundle(args.name)
    print(f"{args.name}: {len(bundle.categories)} categories, {len(bundle.structures)} structures")
    for cid, cat in sorted(bundle.categories.items()):
        print(f"  {cid}: {len(cat.objects)} objects, {len(cat.morphisms)} morphisms")
    for family in Family.ALL:
        for tid in sorted(bundle.transforms(family)):
            print(f"  {family}: {tid}")
    for sid, s in sorted(bundle.structures.items()):
        print(f"  {s.kind} {sid} on {s.category.id}")
    if args.out:
        codec.dump(bundle, args.out)
        print(f"  instance written to {args.out}")
    return EXIT_OK


def cmd_continuity(args) -> int:
    bundle = _load(args)
    a, b = bundle.structure(args.a), bundle.structure(args.b)
    rows = []
    if args.functor:
        F = bundle.functor(args.functor)
        rows.append({"map": F.id, "continuous": functor_continuity(F, a, b)})
    else:
        if a.category.id != b.category.id:
            raise InputError("without --functor both structures must live on one category")
        cat = a.category
        morphisms = [cat.mor(args.morphism)] if args.morphism else list(cat.morphisms)
        for f in morphisms:
            rows.append({"map": f.id, "dom": f.dom, "cod": f.cod,
                         "continuous": morphism_continuity(f, a, b)})
    print(f"({a.id}, {b.id})-continuity")
    print(pd.DataFrame(rows).to_string(index=False))
    _emit({"a": a.id, "b": b.id, "maps": rows}, args.out)
    return _status(all(r["continuous"] for r in rows))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _seed(text: str) -> int:
    return int(text, 0)


def _common(p: argparse.ArgumentParser, inp: bool = True) -> None:
    if inp:
        p.add_argument("--in", dest="input", help="Instance file (JSON)")
    p.add_argument("--out", help="Write the JSON result here")
    p.add_argument("-v", "--verbose", action="store_true")


def _oracle_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED,
                   help=f"Seed for adversarial candidates (default: {DEFAULT_SEED:#x})")
    p.add_argument("--candidates", type=int, default=DEFAULT_CANDIDATES,
                   help=f"Adversarial candidates per certificate (default: {DEFAULT_CANDIDATES})")
    p.add_argument("--max-carrier", type=int, default=None,
                   help=f"Exhaustive enumeration cap (default: {ENUM_CARRIER})")
    p.add_argument("--force", action="store_true", help="Allow enumeration above the default cap")


def _lift_target(p: argparse.ArgumentParser, family_flag: bool) -> None:
    if family_flag:
        p.add_argument("--family", choices=Family.ALL, required=True)
    else:
        p.add_argument("family", choices=Family.ALL)
    p.add_argument("--repr", choices=REPRS, required=True)
    p.add_argument("--structure", help="Id of the structure to lift (default: first of its kind)")
    p.add_argument("--transform", help="Id of the transformation data (default: the only one)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qulab", description="Finite-model lab for lifted topological structures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Validate every item of an instance file")
    _common(p)
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("galois", help="Check the correspondences between structure kinds")
    _common(p)
    p.add_argument("--structure")
    p.set_defaults(run=cmd_galois)

    p = sub.add_parser("lift", help="Lift a structure and certify the result")
    _common(p)
    _lift_target(p, family_flag=False)
    _oracle_flags(p)
    p.add_argument("--report", help="Write the lift report (JSON) here")
    p.set_defaults(run=cmd_lift)

    p = sub.add_parser("oracle", help="Enumeration and certification")
    osub = p.add_subparsers(dest="oracle_command", required=True)

    q = osub.add_parser("enumerate", help="Enumerate structures on a category")
    _common(q)
    q.add_argument("--kind", choices=sorted(ENUMERABLE), required=True)
    q.add_argument("--category")
    q.add_argument("--max-carrier", type=int, default=None,
                   help=f"Enumeration cap (default: {ENUM_CARRIER})")
    q.add_argument("--force", action="store_true")
    q.set_defaults(run=cmd_oracle_enumerate)

    q = osub.add_parser("certify", help="Certify the extremal claim of a lift")
    _common(q)
    _lift_target(q, family_flag=True)
    q.add_argument("--direction", choices=Direction.ALL, default=None,
                   help="Direction to certify (default: the lift's own claim)")
    _oracle_flags(q)
    q.set_defaults(run=cmd_oracle_certify)

    q = osub.add_parser("principality", help="Check that bases have an idempotent least member")
    _common(q)
    q.add_argument("--structure")
    q.set_defaults(run=cmd_oracle_principality)

    p = sub.add_parser("examples", help="Materialize a bundled instance")
    _common(p, inp=False)
    p.add_argument("name", choices=sorted(bundled.BUNDLES))
    p.set_defaults(run=cmd_examples)

    p = sub.add_parser("continuity", help="Check continuity of morphisms or a functor")
    _common(p)
    p.add_argument("--a", required=True, help="Structure at the domain side")
    p.add_argument("--b", required=True, help="Structure at the codomain side")
    p.add_argument("--morphism")
    p.add_argument("--functor")
    p.set_defaults(run=cmd_continuity)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT

    command: Callable = args.run
    try:
        return command(args)
    except InputError as exc:
        print(f"  ERROR: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StructureError as exc:
        print(f"  FAIL: {exc}")
        if exc.witness:
            print("  witness: " + ", ".join(f"{k}={v}" for k, v in exc.witness.items()))
        return EXIT_FAILED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
