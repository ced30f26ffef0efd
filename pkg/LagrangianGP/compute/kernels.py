"""
Squared-exponential kernel K(x̄, ȳ) = exp(-‖x̄ - ȳ‖² / (2ℓ²)) and its mixed partials

The kernel factorises over coordinates, so with r = (x̄ - ȳ)/ℓ and γ = α + β

    ∂^α_x̄ ∂^β_ȳ K(x̄, ȳ) = (-1)^|α| ℓ^(-|γ|) Π_i He_{γ_i}(r_i) · K(x̄, ȳ)

where He_n are the probabilists' Hermite polynomials. All evaluations below go
through `_se_partials`, which broadcasts points and multi-indices against each
other so that single entries, Gram blocks and derivative batches share one code path.
"""

from enum import Enum

import numpy as np

from ..datastructures.phase_point import MultiIndex


class KernelFamily(Enum):
    SQUARED_EXPONENTIAL = 'squared_exponential'


class Kernel(object):
    """
    Positive-definite kernel on the 2d-dimensional phase space
    only attributes with getters/setters can be assigned to this class
    """

    # highest derivative order per argument
    MAX_ORDER = MultiIndex.MAX_ORDER

    __family = None
    __lengthscale = None
    __dim = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, dim, lengthscale=1.0, family=KernelFamily.SQUARED_EXPONENTIAL):
        """
        Parameters
        ----------
        dim : int
            number of phase-space coordinates, 2d
        lengthscale : float
            ℓ > 0; ℓ = 1 gives exp(-‖x̄ - ȳ‖²/2)
        family : KernelFamily
        """
        super(Kernel, self).__init__()
        if not isinstance(family, KernelFamily):
            family = KernelFamily(family)
        if not isinstance(dim, (int, np.integer)) or dim <= 0:
            raise ValueError("kernel dimension must be a positive integer")
        if not lengthscale > 0:
            raise ValueError("lengthscale must be > 0")
        self.__family = family
        self.__lengthscale = float(lengthscale)
        self.__dim = int(dim)

    @property
    def family(self):
        return self.__family

    @property
    def lengthscale(self):
        return self.__lengthscale

    @property
    def dim(self):
        return self.__dim

    def __eq__(self, other):
        return isinstance(other, Kernel) and (self.__family, self.__lengthscale, self.__dim) == \
            (other.family, other.lengthscale, other.dim)

    def __repr__(self):
        return 'Kernel(%s, lengthscale=%g, dim=%d)' % (self.__family.value, self.__lengthscale, self.__dim)


def _hermite_table(u, degree):
    """
    He_0(u) ... He_degree(u) stacked on a new last axis
    """
    table = np.empty(u.shape + (degree + 1,))
    table[..., 0] = 1.0
    if degree >= 1:
        table[..., 1] = u
    for k in range(1, degree):
        table[..., k + 1] = u * table[..., k] - k * table[..., k - 1]
    return table


def _se_partials(K, x, alpha, y, beta):
    """
    ∂^α_x ∂^β_y K(x, y) with numpy broadcasting over the leading axes

    x, y : arrays (..., n); alpha, beta : integer arrays (..., n)
    """
    ell = K.lengthscale
    u = (x - y) / ell
    gamma = alpha + beta
    shape = np.broadcast_shapes(gamma.shape, u.shape)
    u = u.reshape((1,) * (len(shape) - u.ndim) + u.shape)
    degree = int(gamma.max()) if gamma.size else 0
    table = _hermite_table(u, degree)
    idx = np.broadcast_to(gamma, shape)[..., None]
    herm = np.take_along_axis(table, idx, axis=-1)[..., 0].prod(axis=-1)
    base = np.exp(-0.5 * np.sum(u * u, axis=-1))
    sign = np.where(alpha.sum(axis=-1) % 2, -1.0, 1.0)
    return sign * ell ** (-gamma.sum(axis=-1).astype(float)) * herm * base


def _coords(K, point, name):
    coords = np.asarray(getattr(point, 'coords', point), dtype=float)
    if coords.shape[-1] != K.dim:
        raise ValueError("%s has %d coordinates, kernel dimension is %d" % (name, coords.shape[-1], K.dim))
    return coords


def _orders(K, index, name):
    orders = np.asarray(getattr(index, 'orders', index), dtype=int)
    if orders.shape[-1] != K.dim:
        raise ValueError("%s has %d entries, kernel dimension is %d" % (name, orders.shape[-1], K.dim))
    if orders.size and (orders.min() < 0 or orders.sum(axis=-1).max() > K.MAX_ORDER):
        raise ValueError("%s: derivative order too high, at most %d per argument" % (name, K.MAX_ORDER))
    return orders


def kernel_eval(K, x, y):
    """
    K(x̄, ȳ); points may be PhasePoints or arrays with matching leading shapes
    """
    x = _coords(K, x, 'x')
    y = _coords(K, y, 'y')
    r2 = np.sum((x - y) ** 2, axis=-1)
    return np.exp(-0.5 * r2 / K.lengthscale ** 2)


def kernel_partial(K, alpha, beta, x, y):
    """
    ∂^α over the first argument and ∂^β over the second, evaluated at (x̄, ȳ)

    Parameters
    ----------
    K : Kernel
    alpha, beta : MultiIndex or integer array (..., 2d), total order <= 2 each
    x, y : PhasePoint or array (..., 2d)

    Returns
    -------
    float or np.ndarray broadcast over the leading axes
    """
    x = _coords(K, x, 'x')
    y = _coords(K, y, 'y')
    alpha = _orders(K, alpha, 'alpha')
    beta = _orders(K, beta, 'beta')
    out = _se_partials(K, x, alpha, y, beta)
    return float(out) if np.ndim(out) == 0 else out


def kernel_partial_matrix(K, points_a, orders_a, points_b, orders_b):
    """
    Pairwise matrix [∂^{α_s}_1 ∂^{β_t}_2 K(p_s, q_t)]_{s,t}

    Parameters
    ----------
    points_a, orders_a : arrays (Ta, 2d)
    points_b, orders_b : arrays (Tb, 2d)

    Returns
    -------
    np.ndarray, shape (Ta, Tb)
    """
    points_a = _coords(K, points_a, 'points_a')
    points_b = _coords(K, points_b, 'points_b')
    orders_a = _orders(K, orders_a, 'orders_a')
    orders_b = _orders(K, orders_b, 'orders_b')
    return _se_partials(K, points_a[:, None, :], orders_a[:, None, :],
                        points_b[None, :, :], orders_b[None, :, :])


def kernel_derivatives_at(K, points, orders, y, betas):
    """
    [∂^{α_t}_1 ∂^{β_q}_2 K(p_t, ȳ)]_{t,q} for one query point ȳ and several β

    Returns
    -------
    np.ndarray, shape (T, Q)
    """
    points = _coords(K, points, 'points')
    orders = _orders(K, orders, 'orders')
    y = _coords(K, y, 'y').reshape(-1)
    betas = _orders(K, betas, 'betas')
    return _se_partials(K, points[:, None, :], orders[:, None, :], y[None, None, :], betas[None, :, :])


def derivative_indices(dim, max_order=2):
    """
    all multi-indices of total order <= max_order in `dim` coordinates, ordered by
    total order (zero, units, then pairs i <= j)

    Returns
    -------
    np.ndarray of int, shape (Q, dim)
    """
    rows = [np.zeros(dim, dtype=int)]
    if max_order >= 1:
        rows.extend(np.eye(dim, dtype=int))
    if max_order >= 2:
        for i in range(dim):
            for j in range(i, dim):
                e = np.zeros(dim, dtype=int)
                e[i] += 1
                e[j] += 1
                rows.append(e)
    return np.array(rows)
