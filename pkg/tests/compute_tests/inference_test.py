import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from LagrangianGP.compute import inference
from LagrangianGP.compute.inference import (build_constraints_continuous, build_constraints_discrete, assemble_theta,
                                            solve_posterior, train, mean_partial, posterior_cov,
                                            posterior_variances, rkhs_norm, constraint_residuals, PosteriorModel,
                                            shifted_jet)
from LagrangianGP.compute.exceptions import InconsistentConstraintsError
from LagrangianGP.compute.functionals import (eval_functional, pair_bilinear, pair_left, hamiltonian_functional,
                                              raw_partial_functional, el_functional, apply_functional)
from LagrangianGP.compute.kernels import Kernel, kernel_eval
from LagrangianGP.datagen.observations import gen_continuous_observations
from LagrangianGP.datagen.sampling import Box, halton
from LagrangianGP.datastructures import ConstraintSet, Functional, LagrangianKind, MomentumVariant

from ..testMetrics import central_difference


# ==== constraint sets =====

def test_constraint_count_continuous(oscillator):
    jets = gen_continuous_observations(oscillator, halton(80, 4, Box.cube(4)))
    c = build_constraints_continuous(jets, np.zeros(4), np.zeros(2), 1.0)
    assert len(c) == 163
    assert c.n_data == 80
    assert c.kind is LagrangianKind.CONTINUOUS
    assert_array_equal(c.rhs[:160], 0.0)
    assert_array_equal(c.rhs[160:], [0.0, 0.0, 1.0])
    assert c.labels[-3:] == ['Mm[continuous,0]', 'Mm[continuous,1]', 'ev']


def test_constraint_count_discrete(discrete_triples):
    c = build_constraints_discrete(discrete_triples, np.zeros(4), [0.5, -0.5], 2.0)
    assert len(c) == 23
    assert c.kind is LagrangianKind.DISCRETE
    assert_array_equal(c.rhs[-3:], [0.5, -0.5, 2.0])
    with pytest.raises(ValueError):
        build_constraints_discrete(discrete_triples, np.zeros(4), [0.0, 0.0], 1.0, variant=MomentumVariant.CONTINUOUS)


def test_constraint_validation(continuous_jets, discrete_triples):
    with pytest.raises(TypeError):
        build_constraints_continuous(discrete_triples, np.zeros(4), np.zeros(2), 1.0)
    with pytest.raises(ValueError):
        build_constraints_continuous(continuous_jets, np.zeros(6), np.zeros(3), 1.0)
    with pytest.raises(ValueError):
        build_constraints_continuous(continuous_jets, np.zeros(4), np.zeros(3), 1.0)


def test_constraint_count_with_tau(oscillator):
    jets = gen_continuous_observations(oscillator, halton(80, 4, Box.cube(4)))
    c = build_constraints_continuous(jets, np.zeros(4), np.zeros(2), 0.0, tau=shifted_jet(jets[0]), c_tau=1.0)
    assert len(c) == 164
    assert c.labels[-1] == 'EL_tau[0]'
    assert c.rhs[-1] == 1.0
    with pytest.raises(ValueError):
        build_constraints_continuous(jets, np.zeros(4), np.zeros(2), 0.0, tau=shifted_jet(jets[0]), c_tau=0.0)
    with pytest.raises(TypeError):
        build_constraints_continuous(jets, np.zeros(4), np.zeros(2), 0.0, tau=jets[0].base)


# ==== Θ assembly =====

def test_theta_entries_match_pairings(continuous_model):
    """a 5×5 subblock of Θ against the termwise pairing φ¹ψ²K"""
    rng = np.random.default_rng(5)
    theta = continuous_model.gram.theta
    rows = rng.choice(len(continuous_model.constraints), 5, replace=False)
    cols = rng.choice(len(continuous_model.constraints), 5, replace=False)
    K = continuous_model.kernel
    for k in rows:
        for l in cols:
            expected = pair_bilinear(continuous_model.constraints[k], continuous_model.constraints[l], K)
            assert abs(theta[k, l] - expected) < 1e-12 * max(1.0, abs(expected))


def _fd_partial(f, point, orders, h):
    """central differences of order <= 2 in the directions of orders"""
    idx = np.flatnonzero(orders)
    e = np.eye(point.size) * h
    if idx.size == 0:
        return f(point)
    if idx.size == 2:
        i, j = idx
        return (f(point + e[i] + e[j]) - f(point + e[i] - e[j]) - f(point - e[i] + e[j])
                + f(point - e[i] - e[j])) / (4 * h * h)
    i = idx[0]
    if orders[i] == 1:
        return (f(point + e[i]) - f(point - e[i])) / (2 * h)
    return (f(point + e[i]) - 2 * f(point) + f(point - e[i])) / (h * h)


def test_theta_entries_match_finite_differences(continuous_model):
    """second slot of Θ_kl by central differences of y -> φ_k¹K(·, y)"""
    constraints = continuous_model.constraints
    K = continuous_model.kernel
    theta = continuous_model.gram.theta
    n = len(constraints)
    rng = np.random.default_rng(9)
    rows = list(rng.choice(n - 3, 3, replace=False)) + [n - 2, n - 1]
    cols = list(rng.choice(n - 3, 3, replace=False)) + [n - 3, n - 1]
    for k in rows:
        phi = constraints[k]
        for l in cols:
            psi = constraints[l]
            fd = sum(w * _fd_partial(lambda y: pair_left(phi, K, y), p, beta, 2e-4)
                     for (w, p, beta) in zip(psi.weights, psi.points, psi.orders))
            assert abs(theta[k, l] - fd) < 1e-5 * max(1.0, abs(fd))


def test_theta_symmetric_semidefinite(continuous_model, discrete_model):
    for m in (continuous_model, discrete_model):
        theta = m.gram.theta
        assert_array_equal(theta, theta.T)
        assert m.gram.eigvals.min() >= -1e-8 * m.gram.lambda_max


def test_theta_schedule_independent(continuous_model, monkeypatch):
    constraints = continuous_model.constraints
    K = continuous_model.kernel
    serial = assemble_theta(constraints, K).theta
    threaded = assemble_theta(constraints, K, n_workers=3).theta
    assert_array_equal(serial, threaded)
    monkeypatch.setattr(inference, '_BLOCK_ENTRIES', 500)
    blocked = assemble_theta(constraints, K, n_workers=2).theta
    assert_allclose(blocked, serial, rtol=1e-13, atol=1e-12)


def test_theta_single_evaluation():
    c = ConstraintSet([eval_functional([0.3, 0.1, -0.2, 0.5])], [1.0])
    g = assemble_theta(c, Kernel(4))
    assert_array_equal(g.theta, [[1.0]])


def test_theta_dimension_mismatch(continuous_model):
    with pytest.raises(ValueError):
        assemble_theta(continuous_model.constraints, Kernel(2))
    with pytest.raises(TypeError):
        assemble_theta(continuous_model.constraints, 1.0)


# ==== posterior mean =====

def test_zero_normalisation_gives_zero_model(kernel4):
    c = build_constraints_continuous([], np.zeros(4), np.zeros(2), 0.0, d=2)
    m = train(c, kernel4)
    assert_array_equal(m.weights, 0.0)
    assert m.value(np.array([0.3, -0.2, 0.1, 0.4])) == 0.0
    assert rkhs_norm(m) == 0.0


def test_normalisation_only_model(kernel4):
    """with Θ = I the mean is the kernel section at x̄_b"""
    xbar_b = np.array([0.1, -0.2, 0.3, 0.0])
    c = build_constraints_continuous([], xbar_b, np.zeros(2), 1.0, d=2)
    m = train(c, kernel4)
    assert_allclose(m.gram.theta, np.eye(3), atol=1e-15)
    assert_allclose(m.value(xbar_b), 1.0, rtol=1e-14)
    assert_allclose(m.gradient(xbar_b)[2:], 0.0, atol=1e-14)
    point = np.array([0.5, 0.5, -0.5, 0.2])
    assert_allclose(m.value(point), kernel_eval(kernel4, xbar_b, point), rtol=1e-14)


def test_zero_rhs_gives_zero_weights(continuous_model):
    zero = ConstraintSet(continuous_model.constraints.functionals, np.zeros(len(continuous_model.constraints)))
    m = solve_posterior(continuous_model.gram, zero)
    assert_array_equal(m.weights, 0.0)


def test_inconsistent_constraints_raise():
    phi = eval_functional([0.0, 0.0])
    c = ConstraintSet([phi, phi], [1.0, 2.0])
    with pytest.raises(InconsistentConstraintsError):
        train(c, Kernel(2))

def test_looser_range_tol_must_be_explicit():
    """a 2e-7 conflict is rejected at the default tolerance and accepted at 1e-6"""
    point = [0.1, 0.2, 0.3, 0.4]
    c = ConstraintSet([eval_functional(point), eval_functional(point)], [1.0, 1.0 + 2e-7])
    with pytest.raises(InconsistentConstraintsError):
        train(c, Kernel(4))
    m = train(c, Kernel(4), range_tol=1e-6)
    assert np.max(np.abs(constraint_residuals(m))) < 1e-6


def test_residuals_apply_functionals_to_mean(continuous_model, discrete_model):
    for m in (continuous_model, discrete_model):
        direct = np.array([apply_functional(phi, m) for phi in m.constraints]) - m.constraints.rhs
        assert_allclose(constraint_residuals(m), direct, atol=1e-8)


def test_non_motion_condition_fixes_scale(continuous_jets, kernel4):
    """with c_b = 0 and p_b = 0 the shifted jet alone sets ∂²L/∂ẋ⁰∂ẋ⁰ at the base of jet 0"""
    tau = shifted_jet(continuous_jets[0], 0, 1.0)
    c = build_constraints_continuous(continuous_jets, np.zeros(4), np.zeros(2), 0.0, tau=tau, c_tau=1.0)
    m = train(c, kernel4)
    assert np.max(np.abs(m.weights)) > 0.0
    assert_allclose(m.hessian(continuous_jets[0].base.coords)[2, 2], 1.0, atol=1e-6)


def test_nullspace_directions_leave_mean_unchanged(continuous_jets, kernel4, rng):
    """duplicated EL rows make e_0 - e_20 a null vector of Θ"""
    jets = list(continuous_jets) + [continuous_jets[0]]
    c = build_constraints_continuous(jets, np.zeros(4), np.zeros(2), 1.0)
    m = train(c, kernel4)
    n = np.zeros(len(c))
    n[0], n[20] = 1.0, -1.0
    assert_allclose(m.gram.theta @ n, 0.0, atol=1e-12)
    z = m.weights
    assert abs(n @ z) <= 1e-6 * max(1.0, np.max(np.abs(z)))
    shifted = PosteriorModel(kernel4, c, z + n, m.gram)
    points = rng.uniform(-1, 1, (5, 4))
    assert_allclose(shifted.value(points), m.value(points), atol=1e-12)
    assert_allclose(shifted.gradient(points), m.gradient(points), atol=1e-12)



def test_constraints_are_interpolated(continuous_model, discrete_model):
    for m in (continuous_model, discrete_model):
        y = m.constraints.rhs
        assert np.max(np.abs(constraint_residuals(m))) < 1e-8 * max(1.0, np.linalg.norm(y))


def test_model_satisfies_normalisation(continuous_model):
    assert_allclose(continuous_model.value(np.zeros(4)), 1.0, atol=1e-8)
    assert_allclose(continuous_model.gradient(np.zeros(4))[2:], 0.0, atol=1e-8)


def test_scaling_rhs_scales_model(continuous_jets, kernel4, continuous_model):
    scaled = train(build_constraints_continuous(continuous_jets, np.zeros(4), np.zeros(2), 3.0), kernel4)
    point = np.array([0.2, -0.4, 0.1, 0.3])
    assert_allclose(scaled.value(point), 3.0 * continuous_model.value(point), rtol=1e-8)
    w = continuous_model.weights
    assert np.max(np.abs(scaled.weights - 3.0 * w)) < 1e-8 * max(1.0, np.max(np.abs(w)))


def test_mean_partials(continuous_model, rng):
    point = rng.uniform(-1, 1, 4)
    m = continuous_model
    assert mean_partial(m, [0, 0, 0, 0], point) == m.value(point)
    fd = central_difference(m.value, point)
    grad = m.gradient(point)
    assert np.max(np.abs(fd - grad)) < 1e-6 * max(1.0, np.max(np.abs(grad)))
    hess = m.hessian(point)
    assert_array_equal(hess, hess.T)
    fd_hess = np.array([central_difference(lambda c: m.gradient(c)[i], point) for i in range(4)])
    assert np.max(np.abs(fd_hess - hess)) < 1e-6 * max(1.0, np.max(np.abs(hess)))


def test_model_jet_and_batches(continuous_model, rng):
    m = continuous_model
    points = rng.uniform(-1, 1, (3, 4))
    value, grad, hess = m.jet(points[0])
    assert_allclose(value, m.value(points[0]), rtol=1e-12, atol=1e-14)
    assert_allclose(grad, m.gradient(points[0]), rtol=1e-12, atol=1e-14)
    assert_allclose(hess, m.hessian(points[0]), rtol=1e-12, atol=1e-14)
    assert m.value(points).shape == (3,)
    assert m.gradient(points).shape == (3, 4)
    assert m.hessian(points).shape == (3, 4, 4)
    assert m.kind is LagrangianKind.CONTINUOUS
    assert m.d == 2
    with pytest.raises(ValueError):
        m.value(np.zeros(3))


# ==== uncertainty =====

def test_prior_variance():
    c = ConstraintSet([], [])
    m = train(c, Kernel(4))
    assert_allclose(posterior_variances(m, [eval_functional([0.1, 0.2, 0.3, 0.4])]), [1.0], rtol=1e-15)


def test_constraint_functionals_have_no_variance(continuous_model, discrete_model):
    for m in (continuous_model, discrete_model):
        var = posterior_variances(m, m.constraints.functionals)
        prior = np.array([pair_bilinear(phi, phi, m.kernel) for phi in m.constraints])
        assert np.all(var >= 0.0)
        assert np.all(var < 1e-6 * np.maximum(1.0, prior))


def test_posterior_cov_symmetric(continuous_model, rng):
    psi = hamiltonian_functional(rng.uniform(-1, 1, 4))
    phi = eval_functional(rng.uniform(-1, 1, 4))
    assert_allclose(posterior_cov(continuous_model, psi, phi), posterior_cov(continuous_model, phi, psi),
                    rtol=1e-10, atol=1e-10)
    assert_allclose(posterior_cov(continuous_model, psi, psi), posterior_variances(continuous_model, [psi])[0],
                    rtol=1e-6, atol=1e-8)

def test_covariance_bounded_by_prior_for_derivatives(continuous_model, continuous_jets, rng):
    m = continuous_model
    xbar = rng.uniform(-1, 1, 4)
    psis = [raw_partial_functional(xbar, index) for index in ([1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 2, 0], [1, 0, 0, 1])]
    psis += [el_functional(shifted_jet(continuous_jets[3], 1, 0.5), k) for k in range(2)]
    for psi in psis:
        prior = pair_bilinear(psi, psi, m.kernel)
        var = posterior_cov(m, psi, psi)
        assert 0.0 <= var <= prior + 1e-12


def test_self_covariance_is_clamped(continuous_model, discrete_model):
    for m in (continuous_model, discrete_model):
        for phi in m.constraints:
            copy = Functional(phi.weights.copy(), phi.points.copy(), phi.orders.copy(), label=phi.label)
            assert posterior_cov(m, phi, phi) >= 0.0
            assert posterior_cov(m, phi, copy) >= 0.0



def test_variance_below_prior(continuous_model, rng):
    psis = [eval_functional(p) for p in rng.uniform(-1, 1, (20, 4))]
    var = posterior_variances(continuous_model, psis)
    assert var.shape == (20,)
    assert np.all(var <= 1.0 + 1e-12)


def test_rkhs_norm_nondecreasing_on_nested_data(oscillator, kernel4):
    norms = []
    for M in (10, 20, 40):
        jets = gen_continuous_observations(oscillator, halton(M, 4, Box.cube(4)))
        c = build_constraints_continuous(jets, np.zeros(4), np.zeros(2), 1.0)
        m = train(c, kernel4, rtol=1e-12, range_tol=1e-6)
        norms.append(rkhs_norm(m))
    assert norms[0] > 0.0
    assert norms[1] >= norms[0] * (1 - 1e-8)
    assert norms[2] >= norms[1] * (1 - 1e-8)


def test_model_repr(continuous_model):
    assert isinstance(continuous_model, PosteriorModel)
    assert 'M=10' in repr(continuous_model)
