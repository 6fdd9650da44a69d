import pytest

from features.green.service import GreenService
from features.lattice.service import LatticeService
from features.measures.service import MeasuresService


@pytest.fixture(scope="module")
def measures():
    return MeasuresService()


@pytest.fixture(scope="module")
def greens():
    return GreenService()


@pytest.fixture(scope="module")
def lattice():
    return LatticeService()
