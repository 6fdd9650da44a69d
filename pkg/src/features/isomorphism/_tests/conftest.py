import numpy as np
import pytest

from features.green.service import GreenService
from features.isomorphism.service import IsomorphismService
from features.lattice.models.wired import WiredDomain
from features.lattice.service import LatticeService


@pytest.fixture(scope="module")
def iso():
    return IsomorphismService()


@pytest.fixture(scope="module")
def greens():
    return GreenService()


@pytest.fixture(scope="module")
def lattice():
    return LatticeService()


@pytest.fixture(scope="module")
def single(greens):
    return greens.solve_green(WiredDomain.from_sites(4, np.array([(1, 1)])))
