"""
tests/test_structures.py

Axioms, orders and predicates of the four structure kinds.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from engine.fincat import InputError
from engine.galois import syntop_of_qubase, topogenous_of_closure
from engine.oracle import extensive_monotone_tables, topogenous_relations
from engine.structures import (
    Order,
    closure_qubase,
    compare,
    discrete_qubase,
    discrete_syntop,
    discrete_topogenous,
    endomap_of_relation,
    identity_closure,
    indiscrete_closure,
    is_coperfect,
    is_idempotent,
    is_interpolative,
    is_meet_preserving,
    is_simple,
    is_transitive_base,
    leq,
    make_closure,
    make_qubase,
    make_syntop,
    make_topogenous,
    morphism_continuity,
    relation_from_pairs,
    relation_meet_preserving,
    relation_of_endomap,
    row_meets,
    same_union,
    saturate,
    top_closure,
    validate,
)

# carrier 2: extensive and monotone, c(c({0})) = X != c({0})
NOT_IDEMPOTENT = [1, 3, 3, 3]


# ---------------------------------------------------------------------------
# Closures
# ---------------------------------------------------------------------------

def test_stock_closures_are_valid(sets12):
    for c in (identity_closure(sets12), indiscrete_closure(sets12), top_closure(sets12)):
        assert validate(c).ok, c.id


def test_non_extensive_table_fails_c1(x1):
    rep = validate(make_closure(x1, {"X": [0, 0]}))
    assert not rep.passed("C1 extensive: m <= c(m)")
    bad = next(c for c in rep.checks if not c.ok)
    assert bad.witness["m"] == 1


def test_non_monotone_table_fails_c2(x2):
    rep = validate(make_closure(x2, {"X": [1, 1, 2, 3]}))
    assert rep.passed("C1 extensive: m <= c(m)")
    assert not rep.passed("C2 monotone")


def test_closure_not_respected_by_swap_fails_c3(twist):
    rep = validate(make_closure(twist, {"X": [0, 3, 2, 3]}))
    assert rep.passed("C2 monotone")
    assert not rep.passed("C3 every morphism c-continuous")
    bad = next(c for c in rep.checks if not c.ok)
    assert bad.witness["morphism"] == "s"


def test_table_of_wrong_length_is_input_error(x2):
    with pytest.raises(InputError):
        make_closure(x2, {"X": [0, 1, 2]})
    with pytest.raises(InputError):
        make_closure(x2, {"Y": [0, 1, 2, 3]})


def test_closure_order_is_pointwise(x2):
    assert compare(identity_closure(x2), indiscrete_closure(x2)) == Order.LESS
    assert compare(top_closure(x2), indiscrete_closure(x2)) == Order.GREATER
    assert compare(identity_closure(x2), identity_closure(x2)) == Order.EQUAL


def test_idempotence(x2):
    assert is_idempotent(indiscrete_closure(x2))
    assert not is_idempotent(make_closure(x2, {"X": NOT_IDEMPOTENT}))


# ---------------------------------------------------------------------------
# Topogenous orders
# ---------------------------------------------------------------------------

def test_discrete_order_is_valid_meet_preserving_and_interpolative(sets12):
    t = discrete_topogenous(sets12)
    assert validate(t).ok
    assert is_meet_preserving(t)
    assert is_interpolative(t)


def test_order_outside_inclusion_fails_t1(x1):
    rel = relation_from_pairs(1, [(0, 0), (0, 1), (1, 0), (1, 1)])
    assert not validate(make_topogenous(x1, {"X": rel})).passed("T1 m ⊏ n implies m <= n")


def test_unsaturated_order_fails_t2(x1):
    rel = relation_from_pairs(1, [(1, 1)])
    rep = validate(make_topogenous(x1, {"X": rel}))
    assert rep.passed("T1 m ⊏ n implies m <= n")
    assert not rep.passed("T2 stable under shrinking m and growing n")


def test_pair_outside_carrier_is_input_error():
    with pytest.raises(InputError):
        relation_from_pairs(1, [(2, 0)])


def test_order_with_empty_row_is_not_meet_preserving(x1):
    rel = relation_from_pairs(1, [(0, 0), (0, 1)])
    t = make_topogenous(x1, {"X": rel})
    assert validate(t).ok
    assert not is_meet_preserving(t)


def test_row_meets_of_empty_row_is_full_set():
    rel = relation_from_pairs(1, [(0, 0), (0, 1)])
    assert row_meets(rel).tolist() == [0, 1]


# ---------------------------------------------------------------------------
# Bases
# ---------------------------------------------------------------------------

def test_closure_bases_are_valid(x2):
    for c in (identity_closure(x2), indiscrete_closure(x2)):
        b = closure_qubase(c)
        assert validate(b).ok
        assert is_transitive_base(b)


def test_base_order_prefers_smaller_members(x2):
    coarse = closure_qubase(indiscrete_closure(x2))
    fine = discrete_qubase(x2)
    assert leq(coarse, fine)
    assert not leq(fine, coarse)
    assert compare(coarse, fine) == Order.LESS


def test_redundant_member_does_not_change_the_filter(x2):
    one = make_qubase(x2, {"X": [[0, 3, 3, 3]]})
    two = make_qubase(x2, {"X": [[0, 3, 3, 3], [3, 3, 3, 3]]})
    assert validate(two).ok
    assert compare(one, two) == Order.EQUAL


def test_empty_base_is_reported(x2):
    rep = validate(make_qubase(x2, {"X": []}))
    assert not rep.passed("every object has a base element")


def test_non_idempotent_singleton_fails_square_refinement(x2):
    rep = validate(make_qubase(x2, {"X": [NOT_IDEMPOTENT]}))
    assert rep.passed("U1 members inflationary monotone endomaps")
    assert not rep.passed("U2 square refinement: some U' with U'∘U' <= U")


# ---------------------------------------------------------------------------
# Syntopogenous structures
# ---------------------------------------------------------------------------

def test_discrete_syntop(sets12):
    s = discrete_syntop(sets12)
    assert validate(s).ok
    assert is_coperfect(s)
    assert is_simple(s)


def test_empty_family_is_reported(x2):
    assert not validate(make_syntop(x2, {"X": []})).passed("every object has a member")


def test_same_union_ignores_redundant_members(x2):
    full = relation_of_endomap(np.arange(4))
    small = relation_of_endomap(np.array([0, 3, 3, 3]))
    one = make_syntop(x2, {"X": [full]})
    two = make_syntop(x2, {"X": [full, small]})
    assert same_union(one, two)
    assert not is_simple(two)


# ---------------------------------------------------------------------------
# Powerset algebra
# ---------------------------------------------------------------------------

@given(st.sampled_from(extensive_monotone_tables(2)))
def test_endomap_relation_round_trip(table):
    rel = relation_of_endomap(table)
    assert relation_meet_preserving(rel)
    assert endomap_of_relation(rel).tolist() == table.tolist()


@given(st.lists(st.booleans(), min_size=16, max_size=16))
def test_saturate_is_idempotent(cells):
    rel = np.array(cells, dtype=bool).reshape(4, 4)
    once = saturate(rel)
    assert np.array_equal(saturate(once), once)
    assert not np.any(rel & ~once)


def test_every_enumerated_relation_is_saturated():
    for rel in topogenous_relations(2):
        assert np.array_equal(saturate(rel), rel)


# ---------------------------------------------------------------------------
# Continuity
# ---------------------------------------------------------------------------

def test_swap_is_not_continuous_for_a_lopsided_closure(twist):
    lopsided = make_closure(twist, {"X": [0, 3, 2, 3]})
    swap = twist.mor("s")
    assert not morphism_continuity(swap, lopsided, lopsided)
    assert morphism_continuity(swap, identity_closure(twist), identity_closure(twist))


def test_continuity_agrees_across_representations(twist):
    c, d = identity_closure(twist), indiscrete_closure(twist)
    swap = twist.mor("s")
    for a, b in ((c, d), (d, c), (c, c)):
        expected = morphism_continuity(swap, a, b)
        assert morphism_continuity(swap, topogenous_of_closure(a), topogenous_of_closure(b)) == expected
        qa, qb = closure_qubase(a), closure_qubase(b)
        assert morphism_continuity(swap, qa, qb) == expected
        assert morphism_continuity(swap, syntop_of_qubase(qa), syntop_of_qubase(qb)) == expected


def test_continuity_needs_one_kind(twist):
    with pytest.raises(InputError):
        morphism_continuity(twist.mor("s"), identity_closure(twist), discrete_topogenous(twist))
