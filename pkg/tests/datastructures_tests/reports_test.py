import numpy as np
import pytest
from numpy.testing import assert_array_equal

from LagrangianGP.datastructures import (ObservableReport, SymplecticMatrix, NewtonConfig, Trajectory,
                                         LagrangianKind)


def test_observable_report_scalar():
    r = ObservableReport(2.0, 4.0)
    assert r.value == 2.0
    assert r.variance == 4.0
    assert r.std == 2.0
    assert ObservableReport(1.0).variance == 0.0


def test_observable_report_vector():
    r = ObservableReport([1.0, 2.0], [0.0, 1.0])
    assert_array_equal(r.value, [1.0, 2.0])
    with pytest.raises(ValueError):
        ObservableReport([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        ObservableReport(1.0, -1.0)


def test_symplectic_matrix():
    W = SymplecticMatrix([[0.0, 1.0], [-1.0, 0.0]])
    assert W.d == 1
    assert W.antisymmetry_defect() == 0.0
    assert W.kind is LagrangianKind.CONTINUOUS
    with pytest.raises(ValueError):
        SymplecticMatrix(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        SymplecticMatrix(np.zeros((2, 2)), variance=np.zeros((4, 4)))


def test_newton_config():
    cfg = NewtonConfig(tol=1e-10, max_iter=5)
    assert cfg.tol == 1e-10
    assert cfg.max_iter == 5
    assert cfg.fd_jacobian is False
    with pytest.raises(AssertionError):
        NewtonConfig(tol=0.0)
    with pytest.raises(AssertionError):
        NewtonConfig(max_iter=0)


def test_trajectory_continuous():
    states = np.array([[0.0, 1.0], [0.1, 1.0], [0.2, 1.0]])
    t = Trajectory([0.0, 0.1, 0.2], states)
    assert len(t) == 3
    assert t.d == 1
    assert_array_equal(t.positions[:, 0], [0.0, 0.1, 0.2])
    assert_array_equal(t.velocities[:, 0], [1.0, 1.0, 1.0])


def test_trajectory_discrete():
    t = Trajectory([0, 1, 2], [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]], kind=LagrangianKind.DISCRETE)
    assert t.d == 2
    with pytest.raises(AttributeError):
        t.velocities


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory([0.0, 0.0], [[0.0, 1.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        Trajectory([0.0], [[0.0, 1.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        Trajectory([0.0], [[0.0, 1.0, 2.0]])
