"""
tests/test_oracle.py

Exhaustive enumeration, the caps, adversarial candidates and extremality
certificates.
"""

import pytest

from config import DEFAULT_SEED
from engine import oracle
from engine.fincat import InputError
from engine.lifting import Family, certify_lift, continuity_predicate, lift, lift_spec
from engine.oracle import Direction, Mode
from engine.structures import (
    EndoMap,
    Kind,
    Order,
    QUBase,
    compare,
    identity_closure,
    indiscrete_closure,
    is_meet_preserving,
    make_qubase,
    top_closure,
    validate,
)
from tests.conftest import one_object


# ---------------------------------------------------------------------------
# Counts
# ---------------------------------------------------------------------------

def test_counts_on_one_point(x1):
    assert len(list(oracle.enumerate_closures(x1))) == 2
    orders = list(oracle.enumerate_topogenous(x1))
    assert len(orders) == 5
    assert sum(is_meet_preserving(t) for t in orders) == 2
    assert len(list(oracle.enumerate_topogenous(x1, meet_preserving=True))) == 2


def test_counts_on_two_points(x2):
    assert len(list(oracle.enumerate_closures(x2))) == 9
    assert len(list(oracle.enumerate_closures(x2, idempotent=True))) == 7
    assert len(list(oracle.enumerate_principal_qubases(x2))) == 7


def test_counts_on_the_empty_carrier(x0):
    assert len(list(oracle.enumerate_closures(x0))) == 1
    assert len(list(oracle.enumerate_topogenous(x0))) == 2
    assert len(list(oracle.enumerate_topogenous(x0, meet_preserving=True))) == 1


def test_swap_cuts_down_the_closures(twist):
    on_twist = list(oracle.enumerate_closures(twist))
    assert 0 < len(on_twist) < 9
    assert all(validate(c).ok for c in on_twist)


def test_every_enumerated_structure_is_valid(sets12):
    for kind in ("closure", "topogenous", "qubase", "syntop"):
        for s in oracle.enumerate_kind(kind, sets12):
            assert validate(s).ok, (kind, s.id)


def test_every_enumerated_base_is_principal(x2):
    bases = list(oracle.enumerate_qubases(x2))
    assert len(bases) > 7
    for b in bases:
        assert oracle.principality_check(b).ok, b.id


# ---------------------------------------------------------------------------
# Caps
# ---------------------------------------------------------------------------

def test_enumeration_above_the_cap_is_refused():
    x3 = one_object(3)
    with pytest.raises(InputError):
        oracle.enumerate_closures(x3)
    with pytest.raises(InputError):
        oracle.enumeration_limit(cap=3)
    with pytest.raises(InputError):
        oracle.enumeration_limit(cap=4, force=True)
    assert oracle.enumeration_limit(cap=3, force=True) == 3


def test_forced_enumeration_on_three_points():
    x3 = one_object(3)
    closures = list(oracle.enumerate_closures(x3, cap=3, force=True))
    idempotent = list(oracle.enumerate_closures(x3, cap=3, force=True, idempotent=True))
    assert len(idempotent) < len(closures)


def test_unknown_kind_is_input_error(x1):
    with pytest.raises(InputError):
        oracle.enumerate_kind("uniformity", x1)


# ---------------------------------------------------------------------------
# Candidates and certificates
# ---------------------------------------------------------------------------

def test_adversarial_candidates_are_deterministic_and_valid():
    x3 = one_object(3)
    ref = identity_closure(x3)
    first = oracle.adversarial_candidates(ref, n=25, seed=DEFAULT_SEED)
    second = oracle.adversarial_candidates(ref, n=25, seed=DEFAULT_SEED)
    assert [oracle.structure_digest(s) for s in first] == [oracle.structure_digest(s) for s in second]
    assert len({s.key for s in first}) == len(first)
    assert all(validate(s).ok for s in first)


def test_candidate_family_switches_mode(x2):
    _, mode = oracle.candidate_family("closure", x2)
    assert mode == Mode.EXHAUSTIVE
    x3 = one_object(3)
    found, mode = oracle.candidate_family("closure", x3, identity_closure(x3), n=10)
    assert mode == Mode.ADVERSARIAL
    assert found
    with pytest.raises(InputError):
        oracle.candidate_family("closure", x3)


def test_on_required_side():
    x2 = one_object(2)
    low, high = identity_closure(x2), indiscrete_closure(x2)
    assert oracle.on_required_side(low, high, Direction.LEAST) == (True, Order.LESS)
    assert oracle.on_required_side(low, high, Direction.LARGEST) == (False, Order.LESS)
    with pytest.raises(InputError):
        oracle.on_required_side(low, high, "sideways")


def test_certificate_flags_a_counterexample(x2):
    candidates = list(oracle.enumerate_closures(x2))
    # identity is not the largest closure: the top closure sits above it
    cert = oracle.certify_extremal(identity_closure(x2), candidates, lambda c: True, Direction.LARGEST)
    assert not cert.ok
    assert cert.counterexample is not None
    assert cert.n_continuous == len(candidates)

    cert = oracle.certify_extremal(top_closure(x2), candidates, lambda c: True, Direction.LARGEST)
    assert cert.ok


def test_principality_of_a_base_without_least_member(x2):
    b = make_qubase(x2, {"X": [[0, 3, 2, 3], [0, 1, 3, 3]]})
    rep = oracle.principality_check(b)
    assert not rep.passed("X: pointwise meet is a member")


def test_coarsened_copointed_base_lift_fails_its_certificate(sym):
    q = sym.transform(Family.COPOINTED)
    base = sym.structure("U_R")
    cat = q.category
    lifted = lift(Family.COPOINTED, base, q)
    # widen each lifted entourage by the input entourage on the same object
    coarse = QUBase(cat, {
        x: tuple(EndoMap(x, u.table | v.table) for u in lifted.at(x) for v in base.at(x))
        for x in cat.object_ids
    }, "coarse")
    assert validate(coarse).ok
    assert compare(coarse, lifted) == Order.LESS

    continuous = continuity_predicate(Family.COPOINTED, q, base)
    assert continuous(coarse)
    candidates, mode = oracle.candidate_family(Kind.QUBASE, cat, lifted, seeds=(lifted,))
    assert mode == Mode.EXHAUSTIVE
    direction = lift_spec(Family.COPOINTED, Kind.QUBASE).direction

    cert = oracle.certify_extremal(coarse, candidates, continuous, direction)
    assert not cert.ok
    assert cert.counterexample is not None
    assert oracle.certify_extremal(lifted, candidates, continuous, direction).ok

    result = certify_lift(Family.COPOINTED, base, q, lifted=coarse)
    assert not result.ok
    assert result.report.passed("designated maps continuous")
    assert not result.report.passed("universal property (finest)")
