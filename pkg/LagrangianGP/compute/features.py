"""
Truncated Taylor features of the squared-exponential kernel

With t = x̄/ℓ the kernel factorises over coordinates and every factor expands as

    exp(-(t - s)²/2) = Σ_a h_a(t) h_a(s),    h_a(t) = exp(-t²/2) t^a / sqrt(a!)

so K(x̄, ȳ) = Σ_α ψ_α(x̄) ψ_α(ȳ) with ψ_α = Π_i h_{α_i}(t_i). Keeping the total
degrees |α| <= N gives K up to e^{-(|t|-|s|)²/2} Σ_{n>N} (|t||s|)^n / n!.

Applying the constraint functionals to the features gives a factor B of the Gram
matrix, Θ = BBᵀ, that is computed entry by entry without forming Θ. Its singular
values are the square roots of the eigenvalues of Θ, so an SVD of B resolves a
spectrum twice as deep (in orders of magnitude) as an eigendecomposition of Θ.
"""

from math import comb

import numpy as np
import scipy.linalg
import scipy.special
from loguru import logger

from ..datastructures.gram_system import stack_terms, selection_matrix

# relative size of the neglected kernel tail
TRUNCATION_TOL = 1e-17

# evaluation points may lie this factor further out than the training terms
RADIUS_MARGIN = 1.25

# highest per-coordinate derivative order of a feature
_MAX_ORDER = 2

# feature rows assembled per block
_BLOCK_ENTRIES = 400000


def truncation_bound(degree, radius):
    """
    bound on the neglected tail for points with |x̄|/ℓ <= radius, including a
    polynomial factor for derivatives up to fourth order
    """
    s = radius * radius
    n = degree + 1
    if s == 0.0:
        return 0.0
    return float(np.exp(n * np.log(s) - scipy.special.gammaln(n + 1) + 4 * np.log(n)))


def degree_for_radius(radius, tol=TRUNCATION_TOL):
    """smallest total degree N with truncation_bound(N, radius) <= tol"""
    degree = 1
    while truncation_bound(degree, radius) > tol:
        degree += 1
    return degree


def feature_count(dim, degree):
    """number of multi-indices of total degree <= degree in dim coordinates"""
    return comb(degree + dim, dim)


def feature_plan(points, lengthscale, tol=TRUNCATION_TOL):
    """
    (degree, radius) of the features covering `points` with the RADIUS_MARGIN head room
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    largest = float(np.max(np.linalg.norm(points, axis=1))) if points.size else 0.0
    radius = max(RADIUS_MARGIN * largest / lengthscale, 1e-3)
    return degree_for_radius(radius, tol), radius


def _exponents(dim, degree):
    """all α with |α| <= degree, ordered by total degree"""
    if dim == 1:
        return np.arange(degree + 1)[:, None]
    rows = []
    for first in range(degree + 1):
        rest = _exponents(dim - 1, degree - first)
        rows.append(np.hstack([np.full((rest.shape[0], 1), first), rest]))
    out = np.vstack(rows)
    return out[np.argsort(out.sum(axis=1), kind='stable')]


class TaylorFeatures(object):
    """
    Feature map ψ_α, |α| <= degree, of the squared-exponential kernel with length-scale ℓ
    only attributes with getters/setters can be assigned to this class
    """

    __dim = None
    __lengthscale = None
    __degree = None
    __radius = None
    __exponents = None
    __log_norms = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, dim, lengthscale, degree, radius=None):
        """
        Parameters
        ----------
        dim : int
            phase-space dimension 2d
        lengthscale : float
        degree : int
            largest total degree |α|
        radius : float, optional
            |x̄|/ℓ up to which the truncation is accurate (informational)
        """
        super(TaylorFeatures, self).__init__()
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        if not lengthscale > 0:
            raise ValueError("lengthscale must be > 0")
        self.__dim = int(dim)
        self.__lengthscale = float(lengthscale)
        self.__degree = int(degree)
        self.__radius = None if radius is None else float(radius)
        self.__exponents = _exponents(self.__dim, self.__degree)
        self.__log_norms = 0.5 * scipy.special.gammaln(np.arange(self.__degree + 1) + 1.0)

    @classmethod
    def for_points(cls, points, lengthscale, tol=TRUNCATION_TOL):
        """
        features accurate for all points within RADIUS_MARGIN times the largest |x̄|/ℓ of `points`
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        degree, radius = feature_plan(points, lengthscale, tol)
        return cls(points.shape[1], lengthscale, degree, radius=radius)

    @property
    def dim(self):
        return self.__dim

    @property
    def lengthscale(self):
        return self.__lengthscale

    @property
    def degree(self):
        return self.__degree

    @property
    def radius(self):
        return self.__radius

    @property
    def exponents(self):
        return self.__exponents

    @property
    def size(self):
        return self.__exponents.shape[0]

    def _factor_table(self, t):
        """
        h_a^(k)(t) for a = 0..degree and k = 0, 1, 2; shape t.shape + (3, degree + 1)
        """
        N = self.__degree
        a = np.arange(N + 1, dtype=float)
        # padded[..., j + 2] = t^j, zero for negative j
        padded = np.zeros(t.shape + (N + 5,))
        padded[..., 2:] = t[..., None] ** np.arange(N + 3)
        gauss = np.exp(-0.5 * t * t)[..., None] * np.exp(-self.__log_norms)
        table = np.empty(t.shape + (3, N + 1))
        table[..., 0, :] = gauss * padded[..., 2:N + 3]
        table[..., 1, :] = gauss * (a * padded[..., 1:N + 2] - padded[..., 3:N + 4])
        table[..., 2, :] = gauss * (a * (a - 1) * padded[..., 0:N + 1] - (2 * a + 1) * padded[..., 2:N + 3]
                                    + padded[..., 4:N + 5])
        return table

    def matrix(self, points, orders):
        """
        [∂^{β_t} ψ_α(p_t)]_{t,α} for T points and per-point derivative orders

        Parameters
        ----------
        points : array (T, dim)
        orders : integer array (T, dim), entries <= 2

        Returns
        -------
        np.ndarray, shape (T, size)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        orders = np.atleast_2d(np.asarray(orders, dtype=int))
        if points.shape[1] != self.__dim or orders.shape != points.shape:
            raise ValueError("points and orders must both have shape (T, %d)" % self.__dim)
        if orders.size and (orders.min() < 0 or orders.max() > _MAX_ORDER):
            raise ValueError("feature derivatives of order at most %d per coordinate" % _MAX_ORDER)
        ell = self.__lengthscale
        table = self._factor_table(points / ell)
        rows = np.arange(points.shape[0])
        out = np.ones((points.shape[0], self.size))
        for i in range(self.__dim):
            out *= table[rows, i, orders[:, i]][:, self.__exponents[:, i]]
        return out * (ell ** -orders.sum(axis=1).astype(float))[:, None]

    def apply(self, functionals):
        """
        B[k, α] = φ_k ψ_α for a list of functionals (or a ConstraintSet)

        Returns
        -------
        np.ndarray, shape (len(functionals), size)
        """
        functionals = list(functionals)
        weights, points, orders, owner = stack_terms(functionals)
        out = np.zeros((len(functionals), self.size))
        if not functionals:
            return out
        starts = np.searchsorted(owner, np.arange(len(functionals) + 1))
        chunk = max(1, _BLOCK_ENTRIES // self.size)
        first = 0
        while first < len(functionals):
            last = first + 1
            while last < len(functionals) and starts[last + 1] - starts[first] <= chunk:
                last += 1
            t0, t1 = starts[first], starts[last]
            S = selection_matrix(weights[t0:t1], owner[t0:t1] - first, last - first)
            out[first:last] = np.asarray(S @ self.matrix(points[t0:t1], orders[t0:t1]))
            first = last
        return out

    def covers(self, coords):
        """True when |x̄|/ℓ is within the accurate radius"""
        if self.__radius is None:
            return True
        return float(np.linalg.norm(coords)) / self.__lengthscale <= self.__radius

    def __repr__(self):
        return 'TaylorFeatures(dim=%d, degree=%d, size=%d)' % (self.__dim, self.__degree, self.size)


class FeatureFactor(object):
    """
    Factor B = Φψ of a Gram matrix and its thin SVD B = U diag(s) Vᵀ

    Θ + jitter·I has eigenvectors U and eigenvalues s² + jitter.
    """

    def __init__(self, features, matrix, singular_values=None, left=None, right=None):
        """
        Parameters
        ----------
        features : TaylorFeatures
        matrix : np.ndarray (n, size)
            B, one row per constraint functional
        singular_values, left, right : np.ndarray, optional
            precomputed SVD (model files carry it)
        """
        self.features = features
        self.matrix = np.asarray(matrix, dtype=float)
        if singular_values is None or left is None or right is None:
            singular_values, left, right = self._decompose(self.matrix)
        self.singular_values = np.asarray(singular_values, dtype=float)
        self.left = np.asarray(left, dtype=float)
        self.right = np.asarray(right, dtype=float)

    @staticmethod
    def _decompose(matrix):
        n = matrix.shape[0]
        if n == 0:
            return np.zeros(0), np.zeros((0, 0)), np.zeros((0, matrix.shape[1]))
        if n > matrix.shape[1]:
            logger.warning("{} constraints exceed the {} features; Θ is rank deficient", n, matrix.shape[1])
            U, s, Vt = scipy.linalg.svd(matrix, full_matrices=True, lapack_driver='gesvd')
            return np.concatenate([s, np.zeros(n - s.size)]), U, np.vstack([Vt, np.zeros((n - s.size, Vt.shape[1]))])
        U, s, Vt = scipy.linalg.svd(matrix, full_matrices=False, lapack_driver='gesvd')
        return s, U, Vt

    @property
    def size(self):
        return self.matrix.shape[0]

    def __repr__(self):
        return 'FeatureFactor(%d × %d)' % self.matrix.shape


def build_factor(constraints, K, points=None):
    """
    Feature factor of a constraint set for the kernel K

    Parameters
    ----------
    constraints : ConstraintSet or list of Functional
    K : Kernel
    points : array (P, 2d), optional
        additional points the model must evaluate accurately

    Returns
    -------
    FeatureFactor
    """
    _, term_points, _, _ = stack_terms(list(constraints))
    cover = term_points if points is None else np.vstack([term_points, np.atleast_2d(points)])
    features = TaylorFeatures.for_points(cover, K.lengthscale)
    return FeatureFactor(features, features.apply(constraints))
