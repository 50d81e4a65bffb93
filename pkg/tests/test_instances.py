"""
tests/test_instances.py

Finite spaces and preorders, the category builders and the bundled examples.
"""

import pytest

from catalog import bundled
from catalog.builders import (
    alexandrov_adjunction,
    build_finqunif_category,
    entourage_qubase,
    forgetful_fibration,
    kuratowski_closure,
    saturation_closure,
    symmetrization,
    t0_reflection,
)
from catalog.spaces import FinPreorder, FinTopSpace, enumerate_preorders, enumerate_topologies
from engine.fincat import (
    InputError,
    validate_adjunction,
    validate_category,
    validate_copointed,
    validate_fibration,
    validate_pointed,
)
from engine.structures import validate
from store.bundle import check_bundle


# ---------------------------------------------------------------------------
# Spaces and preorders
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (2, 4), (3, 29), (4, 355)])
def test_topology_counts(n, count):
    assert sum(1 for _ in enumerate_topologies(n)) == count


@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 29)])
def test_preorder_counts(n, count):
    assert sum(1 for _ in enumerate_preorders(n)) == count


def test_enumeration_is_capped():
    with pytest.raises(InputError):
        list(enumerate_topologies(5))


def test_enumeration_and_hom_caps_come_from_config(monkeypatch):
    import config
    from catalog import builders, spaces

    assert spaces.MAX_ENUM_POINTS == config.MAX_ENUM_POINTS
    assert builders.MAX_HOM_SCAN == config.MAX_HOM_SCAN
    monkeypatch.setattr(spaces, "MAX_ENUM_POINTS", 2)
    with pytest.raises(InputError):
        list(enumerate_topologies(3))
    monkeypatch.setattr(builders, "MAX_HOM_SCAN", 2)
    with pytest.raises(InputError):
        builders.build_fintop_category([bundled.sierpinski_space()])


def test_sierpinski_closure_and_specialization():
    s = bundled.sierpinski_space()
    assert s.closure(0b01) == 0b01
    assert s.closure(0b10) == 0b11
    assert s.smallest_open(0b01) == 0b11
    assert s.specialization().rows == (0b11, 0b10)
    assert s.is_t0


def test_t0_quotient_merges_indistinguishable_points():
    x3 = bundled.three_point_space()
    assert not x3.is_t0
    q, table = x3.quotient()
    assert table == (0, 0, 1)
    assert q.opens == frozenset({0, 0b01, 0b11})
    assert q.is_t0


def test_alexandrov_topology_inverts_specialization():
    for space in enumerate_topologies(3):
        again = space.specialization().alexandrov()
        assert again.opens == space.opens


def test_preorder_generation_and_symmetric_part():
    arrow = bundled.arrow_preorder()
    assert arrow.rows == (0b11, 0b10)
    assert arrow.symmetric_part().rows == (0b01, 0b10)
    assert FinPreorder.total(2).is_symmetric


def test_invalid_space_is_rejected():
    bad = FinTopSpace(("0", "1"), frozenset({0, 0b01, 0b10}))
    with pytest.raises(InputError):
        bad.check()


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def test_fintop_category_homs_are_continuous_maps(sierpinski_sc):
    cat = sierpinski_sc.category
    assert validate_category(cat).ok
    s = next(x for x in cat.object_ids if sierpinski_sc.space(x).size == 2)
    # the swap is not continuous on the Sierpinski space
    assert cat.find(s, s, (1, 0)) is None
    assert len(cat.hom(s, s)) == 3


def test_finqunif_category_is_valid():
    pc = build_finqunif_category([bundled.arrow_preorder(), FinPreorder.discrete(2, "D")])
    assert validate_category(pc.category).ok


def test_stock_structures_satisfy_their_axioms(sierpinski_sc):
    for s in (kuratowski_closure(sierpinski_sc), saturation_closure(sierpinski_sc),
              entourage_qubase(sierpinski_sc)):
        assert validate(s).ok, s.id


def test_builders_produce_valid_transformations():
    _, p = t0_reflection([bundled.three_point_space()])
    assert validate_pointed(p).ok
    _, q = symmetrization([bundled.arrow_preorder()])
    assert validate_copointed(q).ok
    _, _, ad = alexandrov_adjunction([bundled.sierpinski_space()])
    assert validate_adjunction(ad).ok
    _, _, fd = forgetful_fibration([bundled.sierpinski_space()])
    assert validate_fibration(fd).ok


def test_subspace_embeddings_are_initial():
    sc, _, fd = forgetful_fibration([bundled.sierpinski_space()])
    assert fd.initial
    cat = sc.category
    for mid in fd.initial:
        assert cat.mor(mid).is_injective


# ---------------------------------------------------------------------------
# Bundles
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(bundled.BUNDLES))
def test_bundles_are_well_formed(name):
    shape, axioms = check_bundle(bundled.bundle(name))
    assert shape.ok, shape.lines()
    assert axioms.ok, axioms.lines()


def test_unknown_bundle_is_input_error():
    with pytest.raises(InputError):
        bundled.bundle("moebius")
