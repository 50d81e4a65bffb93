"""
tests/conftest.py

Small categories and bundled instances shared by the test modules.
"""

import pytest

from catalog import bundled
from catalog.builders import build_finset_category, build_fintop_category
from engine.fincat import FinCategory, FinMorphism, FinObject


def one_object(n: int, *extra: tuple[str, tuple[int, ...]]) -> FinCategory:
    """One object X on n points, its identity and any extra self-maps."""
    morphisms = [FinMorphism("1_X", "X", "X", tuple(range(n)), n)]
    morphisms += [FinMorphism(mid, "X", "X", table, n) for mid, table in extra]
    return FinCategory(f"X{n}", (FinObject("X", tuple(str(i) for i in range(n))),), tuple(morphisms))


@pytest.fixture
def x0():
    return one_object(0)


@pytest.fixture
def x1():
    return one_object(1)


@pytest.fixture
def x2():
    return one_object(2)


@pytest.fixture
def twist():
    """X on two points with the swap s."""
    return one_object(2, ("s", (1, 0)))


@pytest.fixture
def sets12():
    return build_finset_category({"n1": 1, "n2": 2})


@pytest.fixture
def sierpinski_sc():
    return build_fintop_category([bundled.point(), bundled.sierpinski_space()])


@pytest.fixture(scope="session")
def t0():
    return bundled.t0_bundle()


@pytest.fixture(scope="session")
def sym():
    return bundled.sym_bundle()


@pytest.fixture(scope="session")
def alexandrov():
    return bundled.alexandrov_bundle()


@pytest.fixture(scope="session")
def forgetful():
    return bundled.forgetful_bundle()
