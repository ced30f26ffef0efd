import numpy as np
import pytest
from numpy.testing import assert_allclose

from LagrangianGP.compute.kernels import (Kernel, KernelFamily, kernel_eval, kernel_partial, kernel_partial_matrix,
                                          kernel_derivatives_at, derivative_indices)


def test_kernel_construction():
    K = Kernel(4, 0.5)
    assert K.dim == 4
    assert K.lengthscale == 0.5
    assert K.family is KernelFamily.SQUARED_EXPONENTIAL
    assert K == Kernel(4, 0.5, 'squared_exponential')
    with pytest.raises(ValueError):
        Kernel(4, 0.0)
    with pytest.raises(ValueError):
        Kernel(0)
    with pytest.raises(TypeError):
        K.scale = 2.0


def test_kernel_eval():
    K = Kernel(2)
    assert kernel_eval(K, [0.3, -0.2], [0.3, -0.2]) == 1.0
    assert_allclose(kernel_eval(K, [1.0, 0.0], [0.0, 1.0]), np.exp(-1.0), rtol=1e-15)
    with pytest.raises(ValueError):
        kernel_eval(K, [0.0, 0.0, 0.0], [0.0, 0.0, 0.0])


def test_first_partials_closed_form():
    K = Kernel(1)
    assert_allclose(kernel_partial(K, [1], [0], [1.0], [0.0]), -np.exp(-0.5), rtol=1e-15)
    assert_allclose(kernel_partial(K, [0], [1], [1.0], [0.0]), np.exp(-0.5), rtol=1e-15)
    # ∂_x∂_y K = (1 - r²) K
    assert_allclose(kernel_partial(K, [1], [1], [2.0], [0.0]), -3.0 * np.exp(-2.0), rtol=1e-14)
    K2 = Kernel(1, 2.0)
    assert_allclose(kernel_partial(K2, [1], [0], [1.0], [0.0]), -0.25 * np.exp(-0.125), rtol=1e-15)


def test_partials_match_finite_differences():
    """
    every mixed partial up to order 2 per argument against a central difference
    of the partial one order lower
    """
    rng = np.random.default_rng(0)
    K = Kernel(2)
    indices = derivative_indices(2)
    lower = [a for a in indices if a.sum() <= 1]
    step = 1e-4
    for _ in range(20):
        x = rng.uniform(-1, 1, 2)
        y = rng.uniform(-1, 1, 2)
        for a in lower:
            for i in range(2):
                e = np.zeros(2)
                e[i] = step
                up = a.copy()
                up[i] += 1
                for b in indices:
                    exact = kernel_partial(K, up, b, x, y)
                    fd = (kernel_partial(K, a, b, x + e, y) - kernel_partial(K, a, b, x - e, y)) / (2 * step)
                    assert abs(exact - fd) < 1e-6 * max(1.0, abs(exact))
                    exact = kernel_partial(K, b, up, x, y)
                    fd = (kernel_partial(K, b, a, x, y + e) - kernel_partial(K, b, a, x, y - e)) / (2 * step)
                    assert abs(exact - fd) < 1e-6 * max(1.0, abs(exact))


def test_partial_symmetry():
    rng = np.random.default_rng(1)
    K = Kernel(4, 0.7)
    indices = derivative_indices(4)
    x, y = rng.uniform(-1, 1, (2, 4))
    for a in indices:
        for b in indices:
            assert_allclose(kernel_partial(K, a, b, x, y), kernel_partial(K, b, a, y, x), rtol=1e-13, atol=1e-15)


def test_partial_matrix_matches_entries():
    rng = np.random.default_rng(2)
    K = Kernel(4)
    indices = derivative_indices(4)
    pa, pb = rng.uniform(-1, 1, (5, 4)), rng.uniform(-1, 1, (3, 4))
    oa, ob = indices[[0, 2, 5, 9, 14]], indices[[1, 7, 12]]
    kmat = kernel_partial_matrix(K, pa, oa, pb, ob)
    assert kmat.shape == (5, 3)
    for s in range(5):
        for t in range(3):
            assert_allclose(kmat[s, t], kernel_partial(K, oa[s], ob[t], pa[s], pb[t]), rtol=1e-14, atol=1e-15)
    kder = kernel_derivatives_at(K, pa, oa, pb[0], ob)
    assert_allclose(kder, kernel_partial_matrix(K, pa, oa, pb[:1].repeat(3, 0), ob)[:, [0, 1, 2]], rtol=1e-14,
                    atol=1e-15)


def test_partial_order_limit():
    K = Kernel(2)
    with pytest.raises(ValueError):
        kernel_partial(K, [2, 1], [0, 0], [0.0, 0.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        kernel_partial(K, [1, 0, 0], [0, 0], [0.0, 0.0], [0.0, 0.0])


def test_derivative_indices():
    idx = derivative_indices(4)
    assert idx.shape == (15, 4)
    assert idx[0].sum() == 0
    assert all(row.sum() == 1 for row in idx[1:5])
    assert all(row.sum() == 2 for row in idx[5:])
    assert derivative_indices(3, max_order=1).shape == (4, 3)
