"""
tests/test_fincat.py

Subset actions, factorization, category and functor validation, and the
transformation data built from identities.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catalog.builders import build_finset_category
from engine.fincat import (
    FinCategory,
    FinMorphism,
    FinObject,
    FunctorData,
    InputError,
    Subset,
    check_adjunction_laws,
    check_e_stability,
    check_square_law,
    compose_functors,
    factorize,
    full_subcategory,
    identity_adjunction,
    identity_copointed,
    identity_fibration,
    identity_functor,
    identity_pointed,
    image,
    image_table,
    preimage,
    preimage_table,
    validate_adjunction,
    validate_category,
    validate_copointed,
    validate_fibration,
    validate_functor,
    validate_pointed,
)
from tests.conftest import one_object


@st.composite
def maps(draw):
    n = draw(st.integers(min_value=0, max_value=4))
    k = draw(st.integers(min_value=1, max_value=4))
    table = tuple(draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n)))
    return FinMorphism("f", "A", "B", table, k)


# ---------------------------------------------------------------------------
# Subsets
# ---------------------------------------------------------------------------

def test_image_and_preimage_on_masks():
    f = FinMorphism("f", "A", "B", (0, 0, 1), 2)
    assert image(f, 0b110) == 0b11
    assert image(f, 0b011) == 0b01
    assert preimage(f, 0b01) == 0b011
    assert preimage(f, 0b10) == 0b100
    assert preimage(f, 0) == 0


def test_image_on_typed_subsets():
    f = FinMorphism("f", "A", "B", (0, 0, 1), 2)
    assert image(f, Subset("A", 0b100)) == Subset("B", 0b10)
    assert preimage(f, Subset("B", 0b11)) == Subset("A", 0b111)
    with pytest.raises(InputError):
        image(f, Subset("B", 1))
    with pytest.raises(InputError):
        preimage(f, Subset("A", 1))


def test_subset_outside_carrier_is_rejected():
    f = FinMorphism("f", "A", "B", (0, 0, 1), 2)
    with pytest.raises(InputError):
        image(f, 1 << 3)


def test_factorize_constant_map():
    e, m = factorize(FinMorphism("k", "A", "B", (1, 1), 2))
    assert e.map == (0, 0) and e.cod_size == 1
    assert m.map == (1,) and m.cod_size == 2
    assert (e.id, m.id) == ("k.e", "k.m")


@given(maps())
def test_factorize_splits_into_surjection_then_injection(f):
    e, m = factorize(f)
    assert e.is_surjective
    assert m.is_injective
    assert e.then(m) == f.map


@given(maps())
def test_tables_agree_with_pointwise_actions(f):
    img, pre = image_table(f), preimage_table(f)
    assert all(int(img[a]) == image(f, a) for a in range(1 << f.dom_size))
    assert all(int(pre[b]) == preimage(f, b) for b in range(1 << f.cod_size))


@settings(max_examples=50)
@given(maps())
def test_adjunction_laws_hold_for_every_map(f):
    assert check_adjunction_laws(f).ok


def test_adjunction_laws_record_exactness_by_map_type():
    rep = check_adjunction_laws(FinMorphism("e", "A", "B", (0, 1, 1), 2))
    assert rep.passed("image of preimage is the identity (surjective)")
    assert not any("injective" in c.name for c in rep.checks)

    rep = check_adjunction_laws(FinMorphism("m", "A", "B", (2, 0), 3))
    assert rep.passed("preimage of image is the identity (injective)")


# ---------------------------------------------------------------------------
# Squares
# ---------------------------------------------------------------------------

def test_square_law_on_commuting_square():
    # X' = 2 points, Y' = 1 point, X = Y = 1 point
    f = FinMorphism("f", "X", "Y", (0,), 1)
    f_prime = FinMorphism("f'", "X'", "Y'", (0, 0), 1)
    p = FinMorphism("p", "Y'", "Y", (0,), 1)
    p_prime = FinMorphism("p'", "X'", "X", (0, 0), 1)
    assert check_square_law(f, f_prime, p, p_prime).ok


def test_square_law_rejects_non_commuting_square():
    f = FinMorphism("f", "X", "Y", (1, 0), 2)
    ident = FinMorphism("1", "X", "X", (0, 1), 2)
    ident_y = FinMorphism("1y", "Y", "Y", (0, 1), 2)
    f_prime = FinMorphism("g", "X", "Y", (0, 1), 2)
    with pytest.raises(InputError):
        check_square_law(f, f_prime, ident_y, ident)


# ---------------------------------------------------------------------------
# Categories
# ---------------------------------------------------------------------------

def test_finset_category_is_valid(sets12):
    assert len(sets12.morphisms) == 8
    rep = validate_category(sets12)
    assert rep.ok
    assert "composition derived from function tables, associative by construction" in rep.notes


def test_identity_and_compose_lookup(sets12):
    one = sets12.identity("n2")
    assert one.id == "1_n2"
    swap = sets12.find("n2", "n2", (1, 0))
    assert sets12.compose(swap, swap).id == "1_n2"
    with pytest.raises(InputError):
        sets12.compose(swap, sets12.identity("n1"))


def test_broken_composition_table_gives_associativity_witness():
    x = FinObject("X", ("0", "1"))
    cat = FinCategory(
        "K",
        (x,),
        (
            FinMorphism("1_X", "X", "X", (0, 1), 2),
            FinMorphism("s", "X", "X", (1, 0), 2),
            FinMorphism("c0", "X", "X", (0, 0), 2),
            FinMorphism("c1", "X", "X", (1, 1), 2),
        ),
        composition=(("s", "s", "c0"),),
    )
    rep = validate_category(cat)
    assert not rep.passed("composition table agrees with function tables")
    assert rep.passed("composition closed")
    assert not rep.passed("composition associative")
    bad = next(c for c in rep.checks if c.name == "composition associative")
    assert bad.witness == {"h": "s", "g": "s", "f": "s"}


def test_missing_identity_is_reported():
    cat = FinCategory("K", (FinObject("X", ("0", "1")),), (FinMorphism("s", "X", "X", (1, 0), 2),))
    rep = validate_category(cat)
    assert not rep.passed("identities exist")


@pytest.mark.parametrize("entry", [("1_X", "ghost", "1_X"), ("1_X", "1_X", "ghost")])
def test_composition_entry_naming_an_unknown_morphism_is_reported(entry):
    x = FinObject("X", ("0",))
    cat = FinCategory("K", (x,), (FinMorphism("1_X", "X", "X", (0,), 1),), composition=(entry,))
    rep = validate_category(cat)
    assert not rep.ok
    bad = next(c for c in rep.checks if c.name == "composition table names known morphisms")
    assert bad.witness["unknown"] == ["ghost"]
    assert bad.witness["declared"] == entry[2]


def test_duplicate_tables_are_reported():
    cat = one_object(1, ("also", (0,)))
    assert not validate_category(cat).passed("distinct morphisms have distinct tables")


def test_full_subcategory_keeps_morphisms_between_kept_objects(sets12):
    sub = full_subcategory(sets12, ["n2"], "only2")
    assert sub.object_ids == ["n2"]
    assert len(sub.morphisms) == 4
    assert validate_category(sub).ok


def test_e_stability_on_finite_sets(sets12):
    assert check_e_stability(sets12).ok


# ---------------------------------------------------------------------------
# Functors
# ---------------------------------------------------------------------------

def test_identity_functor_is_valid(sets12):
    F = identity_functor(sets12)
    assert F.id == "1:FinSet"
    assert validate_functor(F).ok
    assert validate_functor(compose_functors(F, F)).ok


def test_functor_breaking_composition_is_caught():
    cat = build_finset_category({"n2": 2})
    # n2->n2#1 = (0,0), n2->n2#2 = (1,0), n2->n2#3 = (1,1)
    F = FunctorData(
        "bad", cat, cat, {"n2": "n2"},
        {"1_n2": "1_n2", "n2->n2#1": "n2->n2#1", "n2->n2#2": "1_n2", "n2->n2#3": "n2->n2#3"},
    )
    rep = validate_functor(F)
    assert rep.passed("dom/cod preserved")
    assert rep.passed("identities preserved")
    assert not rep.passed("composition preserved")
    bad = next(c for c in rep.checks if c.name == "composition preserved")
    assert bad.witness["f"] == "n2->n2#1"
    assert bad.witness["g"] == "n2->n2#2"


def test_subset_table_needs_equal_carriers_or_a_table(sets12):
    F = FunctorData("to1", sets12, sets12, {"n1": "n1", "n2": "n1"},
                    {f.id: sets12.identity("n1").id for f in sets12.morphisms})
    assert list(F.subset_table("n1")) == [0, 1]
    with pytest.raises(InputError):
        F.subset_table("n2")


# ---------------------------------------------------------------------------
# Transformation data
# ---------------------------------------------------------------------------

def test_identity_transformations_are_valid(sets12):
    p = identity_pointed(sets12)
    rep = validate_pointed(p)
    assert rep.ok
    assert rep.passed("unit: p'(f'^-1(n)) <= f^-1(p(n)) on naturality squares")
    assert p.e_pointed

    q = identity_copointed(sets12)
    assert validate_copointed(q).ok
    assert q.m_copointed

    assert validate_fibration(identity_fibration(sets12)).ok
    assert validate_adjunction(identity_adjunction(sets12)).ok


def test_t0_reflection_is_pointed(t0):
    p = t0.transform("pointed")
    rep = validate_pointed(p)
    assert rep.ok
    assert p.e_pointed


def test_t0_adjunction_is_valid(t0):
    assert validate_adjunction(t0.transform("adjoint")).ok
