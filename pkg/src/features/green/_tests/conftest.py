import pytest

from features.green.service import GreenService
from features.lattice.service import LatticeService


@pytest.fixture(scope="module")
def greens():
    return GreenService()


@pytest.fixture(scope="module")
def lattice():
    return LatticeService()
