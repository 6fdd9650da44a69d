import pytest

from features.green.service import GreenService
from features.lattice.service import LatticeService
from features.walk.service import WalkService


@pytest.fixture(scope="module")
def walks():
    return WalkService()


@pytest.fixture(scope="module")
def greens():
    return GreenService()


@pytest.fixture(scope="module")
def lattice():
    return LatticeService()
