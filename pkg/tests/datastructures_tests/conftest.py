import numpy as np
import pytest

from LagrangianGP.datastructures import PhasePoint, JetPoint, SnapshotTriple, Functional


"""
pytest fixtures are "setup" code that makes resources available for tests
pass a keyword scope = "session", or scope = "module" if the fixture would not
be re-created for each test.
"""


@pytest.fixture
def setup_phase_point():
    return PhasePoint([0.2, 0.1, -0.3, 0.4])


@pytest.fixture
def setup_jet(setup_phase_point):
    return JetPoint(setup_phase_point, [0.5, -0.5])


@pytest.fixture
def setup_triple():
    return SnapshotTriple([0.0, 1.0], [0.1, 0.9], [0.2, 0.8])


@pytest.fixture
def setup_functional():
    """
    2·∂L/∂x⁰ at (0, 0, 0, 0) plus the value at (1, 1, 1, 1)
    """
    points = np.array([[0.0, 0.0, 0.0, 0.0], [1.0, 1.0, 1.0, 1.0]])
    orders = np.array([[1, 0, 0, 0], [0, 0, 0, 0]])
    return Functional([2.0, 1.0], points, orders, label='test')
