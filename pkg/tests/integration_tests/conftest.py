import pytest

from LagrangianGP.utils.ConfigReader import ConfigReader
from LagrangianGP.workflow import train_model


"""
Session fixtures train the models of the oscillator experiments once through the
same configuration path the command line uses.
"""

# DEL rows difference nearby gradients; the solver still aims at 1e-8 but only raises above this
DISCRETE_RANGE_TOL = 'solver.range_tol=1.0e-5'


def _train(kind, M, *extra):
    config = ConfigReader(overrides=['experiment.kind={}'.format(kind),
                                     'training.M={}'.format(M),
                                     'training.p_b=[0.0, 0.0]'] + list(extra))
    model, data = train_model(config)
    return config, model, data


# ============================= continuous oscillator ===============================================
@pytest.fixture(scope="session")
def continuous_80():
    """
    Continuous coupled oscillator (α = 0.1) learned from 80 Halton jets in [-1, 1]^4

    Returns
    -------
    config, PosteriorModel, list of JetPoint
    """
    return _train('continuous_oscillator', 80)


@pytest.fixture(scope="session")
def continuous_300():
    return _train('continuous_oscillator', 300)


# ============================= discrete oscillator =================================================
@pytest.fixture(scope="session")
def discrete_80():
    """
    Discrete coupled oscillator learned from 80 snapshot triples, Δt = 0.1 with 10 midpoint substeps

    Returns
    -------
    config, PosteriorModel, list of SnapshotTriple
    """
    return _train('discrete_oscillator', 80, DISCRETE_RANGE_TOL)


@pytest.fixture(scope="session")
def discrete_300():
    return _train('discrete_oscillator', 300, DISCRETE_RANGE_TOL)
