import numpy as np
import pytest

from LagrangianGP.compute.kernels import Kernel
from LagrangianGP.compute.inference import build_constraints_continuous, build_constraints_discrete, train
from LagrangianGP.compute.dynamics import midpoint_discretisation
from LagrangianGP.datagen.reference_systems import coupled_oscillator
from LagrangianGP.datagen.sampling import Box, halton
from LagrangianGP.datagen.observations import gen_continuous_observations, gen_discrete_observations


"""
pytest fixtures are "setup" code that makes resources available for tests
pass a keyword scope = "session", or scope = "module" if the fixture would not
be re-created for each test.
"""


@pytest.fixture(scope="session")
def oscillator():
    return coupled_oscillator(0.1)


@pytest.fixture(scope="session")
def discrete_oscillator(oscillator):
    """midpoint discrete Lagrangian of the coupled oscillator, Δt = 0.1"""
    return midpoint_discretisation(oscillator, 0.1)


@pytest.fixture(scope="session")
def kernel4():
    return Kernel(4)


@pytest.fixture(scope="session")
def continuous_jets(oscillator):
    """10 exact jets at Halton points of [-1, 1]^4"""
    return gen_continuous_observations(oscillator, halton(10, 4, Box.cube(4)))


@pytest.fixture(scope="session")
def continuous_model(continuous_jets, kernel4):
    """
    M = 10 continuous model normalised by L(0) = 1, ∂L/∂ẋ(0) = 0
    """
    constraints = build_constraints_continuous(continuous_jets, np.zeros(4), np.zeros(2), 1.0)
    return train(constraints, kernel4)


@pytest.fixture(scope="session")
def discrete_triples(oscillator):
    """10 snapshot triples of the oscillator flow from Halton (x, p), Δt = 0.1"""
    return gen_discrete_observations(oscillator, halton(10, 4, Box.cube(4)), 0.1, substeps=10)


@pytest.fixture(scope="session")
def discrete_model(discrete_triples, kernel4):
    """
    M = 10 discrete model normalised by L_d(0) = 1, -∇₁L_d(0) = 0
    """
    constraints = build_constraints_discrete(discrete_triples, np.zeros(4), np.zeros(2), 1.0)
    return train(constraints, kernel4)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
