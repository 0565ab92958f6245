import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from betaexp import make_beta


@pytest.fixture(scope="session")
def G():
    """Golden ratio, exact algebraic backend."""
    return make_beta("poly:x^2-x-1")


@pytest.fixture(scope="session")
def sqrt3():
    return make_beta("poly:x^2-3")


@pytest.fixture(scope="session")
def b19_exact():
    """19/10 on the exact backend (degree-1 defining polynomial)."""
    return make_beta("poly:10*x-19")


@pytest.fixture(scope="session")
def dec19():
    return make_beta("dec:1.9@128")


@pytest.fixture(scope="session")
def dec15():
    return make_beta("dec:1.5")
