"""
tests/test_codec.py

Instance files: canonical dumps, reloading and malformed input.
"""

import json

import pytest

from catalog import bundled
from engine.fincat import InputError
from engine.lifting import Family
from engine.structures import indiscrete_closure
from store import codec
from store.bundle import Bundle, check_bundle


@pytest.mark.parametrize("name", sorted(bundled.BUNDLES))
def test_dump_is_stable_under_reload(name):
    original = bundled.bundle(name)
    text = codec.dump(original)
    again = codec.loads(text)
    assert codec.dump(again) == text
    shape, axioms = check_bundle(again)
    assert shape.ok, shape.lines()
    assert axioms.ok, axioms.lines()


def test_reloaded_t0_keeps_both_transformations(t0):
    again = codec.loads(codec.dump(t0))
    assert set(again.pointed) == set(t0.pointed)
    assert set(again.adjunctions) == set(t0.adjunctions)
    ad = again.transform(Family.ADJOINT)
    assert ad.unit.id != again.transform(Family.POINTED).unit.id


def test_dump_writes_the_file(tmp_path, sym):
    path = tmp_path / "sym.json"
    text = codec.dump(sym, path)
    assert path.read_text(encoding="utf-8") == text
    assert codec.load(path).id == "sym"


@pytest.mark.parametrize("text", ["{not json", "[]", "3"])
def test_malformed_text_is_input_error(text):
    with pytest.raises(InputError):
        codec.loads(text)


def test_missing_file_is_input_error(tmp_path):
    with pytest.raises(InputError):
        codec.load(tmp_path / "absent.json")


def test_missing_key_names_the_item():
    data = {"categories": [{"id": "K", "objects": [{"id": "X"}], "morphisms": []}]}
    with pytest.raises(InputError, match="carrier"):
        codec.from_dict(data)


def test_unknown_object_in_morphism():
    data = {"objects": [{"id": "X", "carrier": ["a"]}],
            "morphisms": [{"id": "f", "dom": "X", "cod": "Y", "map": [0]}]}
    with pytest.raises(InputError, match="unknown object"):
        codec.from_dict(data)


def test_single_category_shorthand_defaults_its_id():
    data = {"objects": [{"id": "X", "carrier": ["a", "b"]}],
            "morphisms": [{"id": "1_X", "dom": "X", "cod": "X", "map": [0, 1]}]}
    bundle = codec.from_dict(data)
    cat = bundle.category()
    assert cat.id == "C"
    assert cat.size("X") == 2


def test_structure_file_reloads(x2):
    c = indiscrete_closure(x2)
    payload = codec.structure_file(c)
    again = codec.loads(json.dumps(payload))
    assert again.structure(c.id).key == c.key


def test_bundle_rejects_two_functors_with_one_id(t0):
    p = t0.transform(Family.POINTED)
    other = Bundle("clash")
    other.add_functor(p.functor)
    ad = t0.transform(Family.ADJOINT)
    impostor = type(ad.left)(p.functor.id, ad.left.source, ad.left.target,
                             dict(ad.left.obj_map), dict(ad.left.mor_map))
    with pytest.raises(InputError):
        other.add_functor(impostor)


@pytest.mark.parametrize("composition", [[7], [["1_X", "1_X"]], 5])
def test_malformed_composition_is_input_error(composition):
    data = {"objects": [{"id": "X", "carrier": ["a"]}],
            "morphisms": [{"id": "1_X", "dom": "X", "cod": "X", "map": [0]}],
            "composition": composition}
    with pytest.raises(InputError, match="composition"):
        codec.from_dict(data)
