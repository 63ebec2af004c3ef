import numpy as np
import pytest

from spinscramble import SpinStarParams, evolution_cache_for


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def n2_params():
    return SpinStarParams(n_outer=2)


@pytest.fixture(scope="session")
def n2_cache(n2_params):
    return evolution_cache_for(n2_params)


@pytest.fixture(scope="session")
def n7_params():
    return SpinStarParams(n_outer=7)


@pytest.fixture(scope="session")
def n7_cache(n7_params):
    return evolution_cache_for(n7_params)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


def random_density(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    return (rho + rho.conj().T) / 2
