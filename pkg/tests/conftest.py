import numpy as np
import pytest

from fitness_evo import FitnessMeasure, IncrementLaw


@pytest.fixture(scope="session")
def half_mix():
    """Atom of mass 1/2 at 1/2 plus Uniform[0,1] with weight 1/2."""
    return FitnessMeasure.atom_uniform_mix(0.5)


@pytest.fixture(scope="session")
def uniform():
    return FitnessMeasure.uniform()


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def gms23():
    return IncrementLaw.gms(2 / 3)
