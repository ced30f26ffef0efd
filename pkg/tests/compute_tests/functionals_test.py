import numpy as np
import pytest
from numpy.testing import assert_allclose

from LagrangianGP.compute.functionals import (el_functional, del_functional, momentum_functional, eval_functional,
                                              raw_partial_functional, hamiltonian_functional,
                                              symplectic_entry_functionals, pair_left, pair_bilinear,
                                              apply_functional)
from LagrangianGP.compute.kernels import Kernel, kernel_eval, kernel_partial
from LagrangianGP.compute.observables import el_residual, hamiltonian, symplectic_form
from LagrangianGP.compute.dynamics import acceleration, midpoint_flow
from LagrangianGP.datastructures import JetPoint, SnapshotTriple, PhasePoint, MomentumVariant, LagrangianKind


def test_el_functional_layout():
    jet = JetPoint([0.2, 0.1, 0.3, -0.4], [1.0, 2.0])
    phi = el_functional(jet, 1)
    assert phi.n_terms == 5
    assert phi.label == 'EL[1]'
    assert phi.orders.sum(axis=1).tolist() == [2, 2, 2, 2, 1]
    with pytest.raises(IndexError):
        el_functional(jet, 2)
    with pytest.raises(TypeError):
        el_functional(PhasePoint([0.0, 0.0]), 0)


def test_el_functional_matches_residual(oscillator, rng):
    for _ in range(10):
        jet = JetPoint(rng.uniform(-1, 1, 4), rng.uniform(-1, 1, 2))
        residual = el_residual(oscillator, jet)
        for k in range(2):
            assert_allclose(apply_functional(el_functional(jet, k), oscillator), residual[k], atol=1e-14)


def test_el_functional_vanishes_on_motions(oscillator, rng):
    point = rng.uniform(-1, 1, 4)
    jet = JetPoint(point, acceleration(oscillator, point))
    for k in range(2):
        assert abs(apply_functional(el_functional(jet, k), oscillator)) < 1e-14


def test_del_functional_vanishes_on_discrete_motions(oscillator, discrete_oscillator):
    snapshots = midpoint_flow(oscillator, [0.2, 0.1], [0.0, 0.3], 0.1, 2).states
    triple = SnapshotTriple(*snapshots)
    for k in range(2):
        phi = del_functional(triple, k)
        assert phi.n_terms == 2
        assert abs(apply_functional(phi, discrete_oscillator)) < 1e-10


def test_momentum_functionals(oscillator, discrete_oscillator, rng):
    point = rng.uniform(-1, 1, 4)
    assert_allclose(apply_functional(momentum_functional(point, 0), oscillator), point[2], rtol=1e-15)
    grad = discrete_oscillator.gradient(point)
    minus = momentum_functional(point, 1, MomentumVariant.DISCRETE_MINUS)
    plus = momentum_functional(point, 1, MomentumVariant.DISCRETE_PLUS)
    assert_allclose(apply_functional(minus, discrete_oscillator), -grad[1], rtol=1e-14)
    assert_allclose(apply_functional(plus, discrete_oscillator), grad[3], rtol=1e-14)


def test_hamiltonian_functional(oscillator, rng):
    point = rng.uniform(-1, 1, 4)
    assert_allclose(apply_functional(hamiltonian_functional(point), oscillator),
                    hamiltonian(oscillator, point).value, rtol=1e-14)


def test_eval_and_raw_partial(oscillator, rng):
    point = rng.uniform(-1, 1, 4)
    assert_allclose(apply_functional(eval_functional(point), oscillator), oscillator.value(point), rtol=1e-15)
    phi = raw_partial_functional(point, [0, 0, 2, 0])
    assert apply_functional(phi, oscillator) == 1.0


@pytest.mark.parametrize("kind", [LagrangianKind.CONTINUOUS, LagrangianKind.DISCRETE])
def test_symplectic_entry_functionals(kind, oscillator, discrete_oscillator, rng):
    source = oscillator if kind is LagrangianKind.CONTINUOUS else discrete_oscillator
    point = rng.uniform(-1, 1, 4)
    W = symplectic_form(source, point).entries
    entries = symplectic_entry_functionals(point, kind)
    for a in range(4):
        for b in range(4):
            phi = entries[a][b]
            expected = 0.0 if phi is None else apply_functional(phi, source)
            assert_allclose(W[a, b], expected, atol=1e-13)


def test_pairings_against_kernel(rng):
    K = Kernel(4)
    x, y = rng.uniform(-1, 1, (2, 4))
    assert_allclose(pair_left(eval_functional(x), K, y), kernel_eval(K, x, y), rtol=1e-15)
    assert_allclose(pair_bilinear(eval_functional(x), eval_functional(y), K), kernel_eval(K, x, y), rtol=1e-15)
    phi = momentum_functional(x, 0)
    psi = momentum_functional(y, 1)
    assert_allclose(pair_bilinear(phi, psi, K), kernel_partial(K, [0, 0, 1, 0], [0, 0, 0, 1], x, y), rtol=1e-14)


def test_pair_bilinear_termwise(rng):
    """the bilinear pairing equals the double sum over terms of kernel partials"""
    K = Kernel(4, 0.8)
    jet = JetPoint(rng.uniform(-1, 1, 4), rng.uniform(-1, 1, 2))
    phi = el_functional(jet, 0)
    psi = hamiltonian_functional(rng.uniform(-1, 1, 4))
    expected = sum(ws * wt * kernel_partial(K, os_, ot, ps, pt)
                   for (ws, ps, os_) in zip(phi.weights, phi.points, phi.orders)
                   for (wt, pt, ot) in zip(psi.weights, psi.points, psi.orders))
    assert_allclose(pair_bilinear(phi, psi, K), expected, rtol=1e-12, atol=1e-14)
    with pytest.raises(ValueError):
        pair_bilinear(phi, eval_functional([0.0, 0.0]), K)
