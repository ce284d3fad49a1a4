from pathlib import Path

import pytest

from hypsupport import algebra_create, field_create


@pytest.fixture(scope="session")
def ea22():
    """Group algebra of (Z/2)^2 over F_2."""
    return algebra_create(field_create(2), 2, 2, 1, [[0, 0], [0, 0]])


@pytest.fixture(scope="session")
def quantum5():
    """n = 2, l = 4, q = 2 over F_5."""
    return algebra_create(field_create(5), 2, 4, 2, [[0, 1], [-1, 0]])


@pytest.fixture(scope="session")
def cyclic4():
    """F_5[x]/(x^4)."""
    return algebra_create(field_create(5), 1, 4, 1, [[0]])


PROBLEMS_DIR = Path(__file__).resolve().parent.parent / "problems"
