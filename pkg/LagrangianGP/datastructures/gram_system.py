import numpy as np
import scipy.linalg
import scipy.sparse

from .functional import Functional, LagrangianKind


class ConstraintSet(object):
    """
    Ordered list of constraint functionals Φ together with the right-hand side y

    For training sets the order is fixed: M·d EL (or DEL) components, then the d
    momentum components at the normalisation point, then the evaluation there.
    only attributes with getters/setters can be assigned to this class
    """

    __functionals = None
    __rhs = None
    __kind = None
    __n_data = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, functionals, rhs, kind=LagrangianKind.CONTINUOUS, n_data=0):
        """
        Parameters
        ----------
        functionals : list of Functional
        rhs : array-like, length len(functionals)
        kind : LagrangianKind
        n_data : int
            number of observations M the set was built from
        """
        super(ConstraintSet, self).__init__()
        functionals = list(functionals)
        rhs = np.array(rhs, dtype=float).reshape(-1)
        if not all(isinstance(phi, Functional) for phi in functionals):
            raise TypeError("constraints must be Functional instances")
        if rhs.size != len(functionals):
            raise ValueError("rhs has %d entries for %d functionals" % (rhs.size, len(functionals)))
        if len({phi.dim for phi in functionals}) > 1:
            raise ValueError("all constraint functionals must live in the same dimension")
        if not isinstance(kind, LagrangianKind):
            raise TypeError("kind must be a LagrangianKind")
        rhs.flags.writeable = False
        self.__functionals = functionals
        self.__rhs = rhs
        self.__kind = kind
        self.__n_data = int(n_data)

    @property
    def functionals(self):
        return list(self.__functionals)

    @property
    def rhs(self):
        return self.__rhs

    @property
    def kind(self):
        return self.__kind

    @property
    def n_data(self):
        return self.__n_data

    @property
    def dim(self):
        return self.__functionals[0].dim if self.__functionals else 0

    @property
    def labels(self):
        return [phi.label for phi in self.__functionals]

    def __len__(self):
        return len(self.__functionals)

    def __getitem__(self, item):
        return self.__functionals[item]

    def term_arrays(self):
        """
        Stack the terms of all functionals

        Returns
        -------
        weights : np.ndarray, shape (T,)
        points : np.ndarray, shape (T, 2d)
        orders : np.ndarray, shape (T, 2d)
        owner : np.ndarray, shape (T,)
            index of the functional each term belongs to; terms of one functional are contiguous
        """
        return stack_terms(self.__functionals)

    def selection_matrix(self):
        """
        sparse (n_functionals × T) matrix S with S[k, t] = weight_t for the terms t of functional k
        """
        weights, _, _, owner = self.term_arrays()
        return selection_matrix(weights, owner, len(self))


def stack_terms(functionals):
    if not functionals:
        return np.zeros(0), np.zeros((0, 0)), np.zeros((0, 0), dtype=int), np.zeros(0, dtype=int)
    weights = np.concatenate([phi.weights for phi in functionals])
    points = np.vstack([phi.points for phi in functionals])
    orders = np.vstack([phi.orders for phi in functionals])
    owner = np.concatenate([np.full(phi.n_terms, k) for (k, phi) in enumerate(functionals)])
    return weights, points, orders, owner


def selection_matrix(weights, owner, n_rows):
    cols = np.arange(weights.size)
    return scipy.sparse.csr_matrix((weights, (owner, cols)), shape=(n_rows, weights.size))


class GramSystem(object):
    """
    Gram matrix Θ of a constraint set and its symmetric eigendecomposition

    The pseudo-inverse keeps the eigenpairs with λ > rtol·λ_max of Θ + jitter·I.
    With a feature factor Θ = BBᵀ the eigenpairs come from the SVD of B instead
    (eigenvalues s² + jitter), and the mean is evaluated through feature weights.
    only attributes with getters/setters can be assigned to this class
    """

    __theta = None
    __jitter = None
    __rtol = None
    __eigvals = None
    __eigvecs = None
    __kernel = None
    __factor = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, theta, kernel=None, jitter=0.0, rtol=1e-12, eigvals=None, eigvecs=None, factor=None):
        """
        Parameters
        ----------
        theta : np.ndarray
            symmetric Gram matrix without jitter
        kernel : Kernel
            kernel the matrix was assembled with
        jitter : float
            nonnegative diagonal shift used for the factorization
        rtol : float
            relative eigenvalue cutoff of the pseudo-inverse
        eigvals, eigvecs : np.ndarray, optional
            precomputed eigendecomposition of theta + jitter·I (model files carry it)
        factor : FeatureFactor, optional
            Θ = BBᵀ with the SVD of B; replaces the eigendecomposition of theta
        """
        super(GramSystem, self).__init__()
        theta = np.array(theta, dtype=float)
        if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
            raise ValueError("theta must be a square matrix")
        if jitter < 0:
            raise ValueError("jitter must be nonnegative")
        if rtol <= 0:
            raise ValueError("rtol must be positive")
        self.__theta = theta
        self.__kernel = kernel
        self.__jitter = float(jitter)
        self.__rtol = float(rtol)
        if factor is not None:
            if factor.size != theta.shape[0]:
                raise ValueError("factor has %d rows for a Gram matrix of size %d" % (factor.size, theta.shape[0]))
            self.__factor = factor
            eigvals, eigvecs = factor.singular_values ** 2 + self.__jitter, factor.left
        elif eigvals is None or eigvecs is None:
            eigvals, eigvecs = self._factorize(theta + self.__jitter * np.eye(theta.shape[0]))
        self.__eigvals = np.asarray(eigvals, dtype=float)
        self.__eigvecs = np.asarray(eigvecs, dtype=float)

    @staticmethod
    def _factorize(matrix):
        if matrix.shape[0] == 0:
            return np.zeros(0), np.zeros((0, 0))
        return scipy.linalg.eigh(matrix)

    @property
    def theta(self):
        return self.__theta

    @property
    def kernel(self):
        return self.__kernel

    @property
    def jitter(self):
        return self.__jitter

    @property
    def rtol(self):
        return self.__rtol

    @property
    def eigvals(self):
        return self.__eigvals

    @property
    def eigvecs(self):
        return self.__eigvecs

    @property
    def factor(self):
        return self.__factor

    @property
    def method(self):
        return 'eigh' if self.__factor is None else 'features'

    @property
    def size(self):
        return self.__theta.shape[0]

    @property
    def lambda_max(self):
        return float(self.__eigvals.max()) if self.size else 0.0

    @property
    def cutoff(self):
        return self.__rtol * max(self.lambda_max, 0.0)

    @property
    def kept(self):
        return self.__eigvals > self.cutoff

    @property
    def rank(self):
        return int(self.kept.sum())

    def with_rtol(self, rtol):
        """
        the same factorization with another eigenvalue cutoff
        """
        return GramSystem(self.__theta, kernel=self.__kernel, jitter=self.__jitter, rtol=rtol, eigvals=self.__eigvals,
                          eigvecs=self.__eigvecs, factor=self.__factor)

    def pinv_apply(self, b):
        """
        Θ† b for a vector or a matrix of right-hand sides
        """
        kept = self.kept
        vecs = self.__eigvecs[:, kept]
        coeffs = vecs.T @ b
        if coeffs.ndim == 1:
            coeffs = coeffs / self.__eigvals[kept]
        else:
            coeffs = coeffs / self.__eigvals[kept][:, None]
        return vecs @ coeffs

    def half_pinv_apply(self, b):
        """
        Λ^{-1/2} Vᵀ b on the kept eigenpairs, so that bᵀΘ†b = ‖half_pinv_apply(b)‖²
        """
        kept = self.kept
        coeffs = self.__eigvecs[:, kept].T @ b
        scale = 1.0 / np.sqrt(self.__eigvals[kept])
        if coeffs.ndim == 1:
            return coeffs * scale
        return coeffs * scale[:, None]

    def nullspace(self):
        """
        eigenvectors discarded by the cutoff, as columns
        """
        return self.__eigvecs[:, ~self.kept]

    def _require_factor(self):
        if self.__factor is None:
            raise ValueError("the Gram system has no feature factor")
        return self.__factor

    def feature_weights(self, y):
        """
        w = Bᵀ Θ† y = V diag(s/λ) Uᵀ y on the kept pairs; the mean is Σ_α w_α ψ_α
        """
        factor = self._require_factor()
        kept = self.kept
        coeffs = (self.__eigvecs[:, kept].T @ y) * (factor.singular_values[kept] / self.__eigvals[kept])
        return factor.right[kept].T @ coeffs

    def feature_residuals(self, f):
        """
        Parts of feature vectors f (rows) that the constraints do not determine

        Returns
        -------
        residual : np.ndarray, same shape as f
            f minus its projection on the kept right singular vectors
        shrink : np.ndarray, shape (Q, rank)
            sqrt(jitter/λ)·Vᵀf, the share a jittered solve leaves undetermined
        """
        factor = self._require_factor()
        kept = self.kept
        right = factor.right[kept]
        coords = np.atleast_2d(f) @ right.T
        residual = np.atleast_2d(f) - coords @ right
        shrink = coords * np.sqrt(self.__jitter / self.__eigvals[kept])
        return residual, shrink

    def spectrum_summary(self):
        if not self.size:
            return {'size': 0, 'rank': 0, 'lambda_max': 0.0, 'lambda_min': 0.0,
                    'cutoff': 0.0, 'jitter': self.__jitter, 'method': self.method}
        return {'size': self.size,
                'rank': self.rank,
                'lambda_max': float(self.__eigvals.max()),
                'lambda_min': float(self.__eigvals.min()),
                'cutoff': self.cutoff,
                'jitter': self.__jitter,
                'method': self.method}

    def __repr__(self):
        return 'GramSystem(size=%d, rank=%d, %s)' % (self.size, self.rank, self.method)
