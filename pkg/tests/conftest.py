import pytest

from nilwalk.algebra.groups import (
    heisenberg_generators,
    unitriangular_elementary,
    unitriangular_spec,
    zd_spec,
)


@pytest.fixture
def heisenberg():
    """U(3) with S = (X, Y, Z)."""
    return unitriangular_spec(3, heisenberg_generators(), label="H3")


@pytest.fixture
def heisenberg_xy():
    x, y, _ = heisenberg_generators()
    return unitriangular_spec(3, (x, y), label="H3'")


@pytest.fixture
def heisenberg_z5():
    """S = (X, Y, Z^5)."""
    x, y, _ = heisenberg_generators()
    return unitriangular_spec(3, (x, y, unitriangular_elementary(3, 1, 3, 5)), label="H3 Z^5")


@pytest.fixture
def u4_with_corner():
    """U(4) with S = (E12, E23, E34, E14)."""
    generators = tuple(unitriangular_elementary(4, i, j) for i, j in ((1, 2), (2, 3), (3, 4), (1, 4)))
    return unitriangular_spec(4, generators)


@pytest.fixture
def z2():
    return zd_spec([(1, 0), (0, 1)])


@pytest.fixture
def z3():
    return zd_spec([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
