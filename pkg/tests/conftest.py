import numpy as np
import pytest

from compatpair.symbols import GaussianTermSymbol, PhaseGrid


@pytest.fixture(scope="session")
def grid64():
    return PhaseGrid(64, 4.0)


@pytest.fixture(scope="session")
def grid256():
    return PhaseGrid(256, 8.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_gaussian_term(rng, width=(0.8, 1.6), offset=0.5):
    s = rng.uniform(*width)
    E = 0.08 * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    E = 0.5 * (E + E.T)
    b = offset * rng.standard_normal(2) + 0.4j * rng.standard_normal(2)
    amp = 1.0 + 0.3 * rng.standard_normal() + 0.3j * rng.standard_normal()
    return GaussianTermSymbol.single(amp, s * np.eye(2) + E, b)
