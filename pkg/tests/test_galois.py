"""
tests/test_galois.py

Translations between closures, topogenous orders, bases and
syntopogenous structures.
"""

import numpy as np
import pytest

from engine import oracle
from engine.fincat import StructureError
from engine.galois import (
    closure_of_qubase,
    closure_of_syntop,
    closure_of_topogenous,
    qubase_of_closure,
    qubase_of_syntop,
    round_trip_report,
    syntop_of_closure,
    syntop_of_qubase,
    topogenous_of_closure,
)
from engine.structures import (
    Order,
    compare,
    indiscrete_closure,
    is_coperfect,
    is_idempotent,
    is_interpolative,
    make_closure,
    make_qubase,
    make_syntop,
    make_topogenous,
    relation_from_pairs,
    relation_of_endomap,
    validate,
)


def test_closure_order_round_trip_on_every_closure(twist):
    closures = list(oracle.enumerate_closures(twist))
    assert closures
    for c in closures:
        t = topogenous_of_closure(c)
        assert validate(t).ok
        assert closure_of_topogenous(t).key == c.key


def test_idempotent_exactly_when_interpolative(x2):
    closures = list(oracle.enumerate_closures(x2))
    assert len(closures) == 9
    assert sum(is_idempotent(c) for c in closures) == 7
    for c in closures:
        assert is_idempotent(c) == is_interpolative(topogenous_of_closure(c))


def test_order_with_empty_row_has_no_closure(x1):
    t = make_topogenous(x1, {"X": relation_from_pairs(1, [(0, 0), (0, 1)])})
    with pytest.raises(StructureError) as info:
        closure_of_topogenous(t)
    assert info.value.witness["object"] == "X"
    assert info.value.witness["m"] == 1


def test_non_coperfect_structure_has_no_base(x1):
    s = make_syntop(x1, {"X": [relation_from_pairs(1, [(0, 0), (0, 1)])]})
    assert not is_coperfect(s)
    with pytest.raises(StructureError):
        qubase_of_syntop(s)


def test_two_member_structure_is_not_simple(x2):
    ident = relation_of_endomap(np.arange(4))
    lumped = relation_of_endomap(np.array([0, 3, 3, 3]))
    s = make_syntop(x2, {"X": [ident, lumped]})
    with pytest.raises(StructureError):
        closure_of_syntop(s)


def test_non_idempotent_closure_has_no_transitive_base(x2):
    c = make_closure(x2, {"X": [1, 3, 3, 3]})
    with pytest.raises(StructureError) as info:
        qubase_of_closure(c)
    assert info.value.witness["m"] == 0


def test_base_without_least_member_has_no_closure(x2):
    b = make_qubase(x2, {"X": [[0, 3, 2, 3], [0, 1, 3, 3]]})
    with pytest.raises(StructureError):
        closure_of_qubase(b)


def test_idempotent_closure_round_trips_through_every_kind(x2):
    c = indiscrete_closure(x2)
    b = qubase_of_closure(c)
    s = syntop_of_closure(c)
    assert validate(b).ok
    assert validate(s).ok
    assert closure_of_qubase(b).key == c.key
    assert closure_of_syntop(s).key == c.key
    assert compare(qubase_of_syntop(syntop_of_qubase(b)), b) == Order.EQUAL


@pytest.mark.parametrize("enumerate_", [
    oracle.enumerate_closures,
    oracle.enumerate_topogenous,
    oracle.enumerate_principal_qubases,
    lambda cat: oracle.enumerate_simple_syntops(cat, coperfect=True),
])
def test_round_trip_reports_pass(sets12, enumerate_):
    for s in enumerate_(sets12):
        rep = round_trip_report(s)
        assert rep.ok, rep.lines()


def test_round_trip_report_notes_non_meet_preserving_order(x1):
    t = make_topogenous(x1, {"X": relation_from_pairs(1, [(0, 0), (0, 1)])})
    rep = round_trip_report(t)
    assert rep.ok
    assert rep.notes == ["order is not meet-preserving: no closure corresponds"]
