"""
tests/test_lifting.py

The twelve lifts: identity transformations, the bundled instances and the
certified claims.
"""

from itertools import product

import pytest

from catalog import bundled
from catalog.builders import alexandrov_adjunction, forgetful_fibration, t0_reflection
from catalog.spaces import FinTopSpace
from engine import oracle
from engine.fincat import (
    CopointedEndo,
    FinCategory,
    FinMorphism,
    FinObject,
    InputError,
    NatTransData,
    StructureError,
    identity_adjunction,
    identity_copointed,
    identity_fibration,
    identity_functor,
    identity_pointed,
)
from engine.galois import qubase_of_closure, syntop_of_closure
from engine.lifting import (
    LIFTS,
    REPRS,
    Family,
    base_category,
    certify_lift,
    lift,
    lift_adjoint_closure,
    lift_adjoint_qubase,
    lift_adjoint_syntop,
    lift_copointed_closure,
    lift_pointed_closure,
    lift_pointed_qubase,
    lift_spec,
)
from engine.oracle import Direction
from engine.structures import (
    Kind,
    Order,
    closure_qubase,
    compare,
    identity_closure,
    indiscrete_closure,
    is_idempotent,
    leq,
    make_closure,
    validate,
)

IDENTITIES = {
    Family.POINTED:   identity_pointed,
    Family.COPOINTED: identity_copointed,
    Family.FIBRATION: identity_fibration,
    Family.ADJOINT:   identity_adjunction,
}


def _in_every_repr(c):
    b = closure_qubase(c)
    return {Kind.CLOSURE: c, Kind.QUBASE: b, Kind.SYNTOP: syntop_of_closure(c)}


def test_registry_covers_every_family_and_representation():
    assert len(LIFTS) == 12
    for family in Family.ALL:
        for repr_ in REPRS:
            spec = lift_spec(family, repr_)
            assert spec.direction in Direction.ALL
            assert spec.claim


def test_unknown_lift_is_input_error():
    with pytest.raises(InputError):
        lift_spec("sideways", Kind.CLOSURE)
    with pytest.raises(InputError):
        lift_spec(Family.POINTED, Kind.TOPOGENOUS)


@pytest.mark.parametrize("family", Family.ALL)
def test_identity_transformation_lifts_to_the_input(sets12, family):
    transform = IDENTITIES[family](sets12)
    for s in _in_every_repr(indiscrete_closure(sets12)).values():
        lifted = lift(family, s, transform)
        assert compare(lifted, s) == Order.EQUAL, (family, s.kind)


@pytest.mark.parametrize("family", Family.ALL)
def test_identity_transformation_certifies_exhaustively(sets12, family):
    transform = IDENTITIES[family](sets12)
    for s in _in_every_repr(identity_closure(sets12)).values():
        result = certify_lift(family, s, transform)
        assert result.ok, result.report.lines()
        assert [c.mode for c in result.certificates][0] == "exhaustive"


def test_structure_on_the_wrong_category_is_rejected(sets12, x2):
    with pytest.raises(InputError):
        lift(Family.POINTED, identity_closure(x2), identity_pointed(sets12))


def test_warning_for_non_idempotent_closure(x2, capsys):
    c = make_closure(x2, {"X": [1, 3, 3, 3]})
    lift_pointed_closure(c, identity_pointed(x2), verbose=True)
    assert "WARN" in capsys.readouterr().out


def test_copointed_lift_needs_injective_counit():
    x = FinObject("X", ("0", "1"))
    cat = FinCategory("K", (x,), (
        FinMorphism("1_X", "X", "X", (0, 1), 2),
        FinMorphism("c0", "X", "X", (0, 0), 2),
    ))
    one = identity_functor(cat)
    q = CopointedEndo("q", one, NatTransData("eps", one, one, {"X": "c0"}))
    with pytest.raises(StructureError) as info:
        lift_copointed_closure(identity_closure(cat), q)
    assert info.value.witness == {"object": "X", "component": "c0"}


# ---------------------------------------------------------------------------
# Bundled instances
# ---------------------------------------------------------------------------

def test_pointed_lift_through_t0_gives_back_the_kuratowski_closure(t0):
    p = t0.transform(Family.POINTED)
    cl = t0.structure("cl")
    lifted = lift(Family.POINTED, cl, p)
    assert lifted.key == cl.key


def test_pointed_lift_certificate_is_adversarial_on_three_points(t0):
    p = t0.transform(Family.POINTED)
    result = certify_lift(Family.POINTED, t0.structure("cl"), p, n_candidates=30)
    assert result.ok, result.report.lines()
    cert = result.certificates[0]
    assert cert.mode == "adversarial"
    assert cert.n_continuous >= 1


def test_extremal_scan_can_be_skipped(t0):
    result = certify_lift(Family.POINTED, t0.structure("U_R"), t0.transform(Family.POINTED), extremal=False)
    assert result.certificates == []
    assert "extremal claim not checked" in result.report.notes
    assert result.report.passed("designated maps continuous")


def test_copointed_base_lift_is_the_symmetric_part(sym):
    q = sym.transform(Family.COPOINTED)
    base = sym.structure("U_R")
    lifted = lift(Family.COPOINTED, base, q)
    assert validate(lifted).ok
    for x in q.category.object_ids:
        below = base.at(q.functor.on_obj(x))[0].table
        assert lifted.at(x)[0].table.tolist() == below.tolist()


def test_adjoint_closure_lift_is_the_smallest_open_superset(alexandrov):
    ad = alexandrov.transform(Family.ADJOINT)
    sat = alexandrov.structure("sat")
    lifted = lift(Family.ADJOINT, sat, ad)
    spaces = alexandrov.space_category(ad.left.source.id)
    for x in ad.left.source.object_ids:
        space = spaces.space(x)
        assert lifted.at(x).tolist() == [space.smallest_open(m) for m in range(1 << space.size)]


def test_adjoint_syntop_lift_certifies(alexandrov):
    ad = alexandrov.transform(Family.ADJOINT)
    result = certify_lift(Family.ADJOINT, alexandrov.structure("S_R"), ad, n_candidates=30)
    assert result.ok, result.report.lines()


def test_fibration_lift_keeps_identity_and_indiscrete(forgetful):
    fd = forgetful.transform(Family.FIBRATION)
    top = fd.functor.source
    for sid, expected in (("identity", identity_closure(top)), ("indiscrete", indiscrete_closure(top))):
        lifted = lift(Family.FIBRATION, forgetful.structure(sid), fd)
        assert lifted.key == expected.key, sid


def test_fibration_lift_on_every_forced_input_at_three_points():
    _, sets, fd = forgetful_fibration([bundled.three_point_space()])
    assert sets.max_carrier == 3
    closures = list(oracle.enumerate_closures(sets, cap=3, force=True))
    inputs = [
        *closures,
        *oracle.enumerate_principal_qubases(sets, cap=3, force=True),
        *(syntop_of_closure(c) for c in closures if is_idempotent(c)),
    ]
    assert any(is_idempotent(c) for c in closures)
    for s in inputs:
        result = certify_lift(Family.FIBRATION, s, fd, extremal=False)
        assert result.ok, (s.kind, s.id, result.report.lines())


# ---------------------------------------------------------------------------
# Monotone dependence and reflective coherence
# ---------------------------------------------------------------------------

SMALL_TRANSFORMS = {
    Family.POINTED:   lambda: t0_reflection([bundled.sierpinski_space(), FinTopSpace.indiscrete(2, "I2")])[1],
    Family.COPOINTED: lambda: bundled.sym_bundle().transform(Family.COPOINTED),
    Family.FIBRATION: lambda: bundled.forgetful_bundle().transform(Family.FIBRATION),
    Family.ADJOINT:   lambda: alexandrov_adjunction([bundled.sierpinski_space()])[2],
}

ENUMERATED = {
    Kind.CLOSURE: oracle.enumerate_closures,
    Kind.QUBASE:  oracle.enumerate_principal_qubases,
    Kind.SYNTOP:  lambda cat: oracle.enumerate_simple_syntops(cat, coperfect=True),
}


@pytest.mark.parametrize("family", Family.ALL)
@pytest.mark.parametrize("kind", sorted(ENUMERATED))
def test_lift_is_monotone_on_enumerated_pairs(family, kind):
    transform = SMALL_TRANSFORMS[family]()
    inputs = list(ENUMERATED[kind](base_category(family, transform)))
    lifted = [lift(family, s, transform) for s in inputs]
    comparable = 0
    for i, j in product(range(len(inputs)), repeat=2):
        if i != j and leq(inputs[i], inputs[j]):
            comparable += 1
            assert leq(lifted[i], lifted[j]), (inputs[i].id, inputs[j].id)
    assert comparable > 0


def test_reflection_and_adjunction_lifts_agree(t0):
    p = t0.transform(Family.POINTED)
    ad = t0.transform(Family.ADJOINT)
    cl, cl0 = t0.structure("cl"), t0.structure("cl0")

    closure = lift_pointed_closure(cl, p)
    assert is_idempotent(closure)
    assert compare(lift_adjoint_closure(cl0, ad), closure) == Order.EQUAL

    base = qubase_of_closure(closure)
    for other in (lift_pointed_qubase(qubase_of_closure(cl), p),
                  lift_adjoint_qubase(qubase_of_closure(cl0), ad)):
        assert compare(other, base) == Order.EQUAL

    structure = syntop_of_closure(closure)
    assert compare(lift_adjoint_syntop(syntop_of_closure(cl0), ad), structure) == Order.EQUAL
    assert compare(lift(Family.POINTED, syntop_of_closure(cl), p), structure) == Order.EQUAL
