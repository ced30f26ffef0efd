"""
Conditioning the canonical Gaussian field on Euler-Lagrange data and normalisation

The constraint functionals Φ are assembled into Θ_kl = φ_k¹φ_l²K, the weights solve
Θz = y through the eigendecomposition pseudo-inverse, and the posterior mean is
L_(M)(x̄) = Σ_k z_k φ_k¹K(·, x̄). Posterior covariances follow
ψ¹φ²K - (ψ𝒦Φᵀ)Θ†(Φ𝒦φ).

In low dimension Θ is not factorised directly. The Taylor features ψ of the kernel
give Θ = BBᵀ with B = Φψ, and the SVD of B resolves the spectrum of Θ far below
machine precision relative to its largest eigenvalue (see compute.features). The
mean is then Σ_α w_α ψ_α with w = Bᵀz computed from the SVD.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from loguru import logger

from ..datastructures.phase_point import PhasePoint, JetPoint, SnapshotTriple
from ..datastructures.functional import Functional, LagrangianKind, MomentumVariant
from ..datastructures.gram_system import ConstraintSet, GramSystem, stack_terms, selection_matrix
from .exceptions import InconsistentConstraintsError, NonFiniteGramError
from .features import build_factor, feature_plan, feature_count
from .functionals import el_functional, del_functional, momentum_functional, eval_functional, pair_bilinear
from .kernels import Kernel, kernel_partial_matrix, kernel_derivatives_at, derivative_indices

# number of kernel entries evaluated per block during assembly
_BLOCK_ENTRIES = 400000

METHODS = ('auto', 'eigh', 'features')

# relative eigenvalue cutoff of the pseudo-inverse when none is given
DEFAULT_RTOL = {'eigh': 1e-12, 'features': 1e-26}

# eigenvalue cutoffs tried in turn when the solver adapts the cutoff
RTOL_LADDER = (1e-12, 1e-13, 1e-14, 1e-15)

# residual the adaptive cutoff aims for, relative to max(1, ‖y‖)
INTERPOLATION_TOL = 1e-8

# 'auto' factors through features up to this many of them
MAX_FEATURES = 4000

# largest phase-space dimension 'auto' factors through features
FEATURE_MAX_DIM = 2


def _normalisation(xbar_b, p_b, c_b, variant, d):
    xbar_b = xbar_b if isinstance(xbar_b, PhasePoint) else PhasePoint(xbar_b)
    if xbar_b.d != d:
        raise ValueError("normalisation point has d = %d, data has d = %d" % (xbar_b.d, d))
    p_b = np.array(p_b, dtype=float).reshape(-1)
    if p_b.size != d:
        raise ValueError("p_b must have %d entries" % d)
    functionals = [momentum_functional(xbar_b, k, variant) for k in range(d)]
    functionals.append(eval_functional(xbar_b))
    return functionals, list(p_b) + [float(c_b)]


def _check_tau(c_tau, k, d):
    if c_tau == 0:
        raise ValueError("the non-motion condition needs c_tau != 0")
    if not 0 <= k < d:
        raise IndexError("component index %d out of range for d = %d" % (k, d))


def _relabel(phi, label):
    return Functional(phi.weights, phi.points, phi.orders, label=label)


def _warn_duplicates(base_points):
    if len(base_points) > 1:
        unique = np.unique(np.asarray(base_points), axis=0)
        if unique.shape[0] < len(base_points):
            logger.warning("{} duplicate base points in the data; Θ is singular in the data block",
                           len(base_points) - unique.shape[0])


def shifted_jet(jet, k=0, shift=1.0):
    """
    the jet with ẍ^k moved by `shift`; off the motions when `jet` lies on one
    """
    accel = np.array(jet.accel, dtype=float)
    accel[k] += shift
    return JetPoint(jet.base, accel)


def shifted_triple(triple, k=0, shift=1.0):
    """
    the triple with x2^k moved by `shift`
    """
    x2 = np.array(triple.x2, dtype=float)
    x2[k] += shift
    return SnapshotTriple(triple.x0, triple.x1, x2)


def build_constraints_continuous(data, xbar_b, p_b, c_b, d=None, tau=None, c_tau=1.0, k_tau=0):
    """
    EL components of every jet, then momenta and evaluation at x̄_b, then optionally
    the non-motion condition (EL(L)(τ))_k = c_τ

    Parameters
    ----------
    data : list of JetPoint
        may be empty (pure normalisation model)
    xbar_b : PhasePoint or array-like
    p_b : array-like, length d
    c_b : float
    d : int, optional
        needed only to validate an empty data list against x̄_b
    tau : JetPoint, optional
        jet off the motions of the system; fixes the scale of L through ∂²L/∂ẋ∂ẋ,
        so that c_b = 0 and p_b = 0 no longer admit the null Lagrangian
    c_tau : float
        nonzero value of the k_tau-th EL component at tau
    k_tau : int

    Returns
    -------
    ConstraintSet with (M+1)d+1 functionals and rhs (0, ..., 0, p_b, c_b), plus one
    functional with rhs c_τ when tau is given
    """
    data = list(data)
    if not all(isinstance(jet, JetPoint) for jet in data):
        raise TypeError("continuous training data must be JetPoints")
    d = data[0].d if data else (d or PhasePoint(getattr(xbar_b, 'coords', xbar_b)).d)
    _warn_duplicates([jet.base.coords for jet in data])
    functionals = [el_functional(jet, k) for jet in data for k in range(d)]
    rhs = [0.0] * len(functionals)
    norm_functionals, norm_rhs = _normalisation(xbar_b, p_b, c_b, MomentumVariant.CONTINUOUS, d)
    functionals, rhs = functionals + norm_functionals, rhs + norm_rhs
    if tau is not None:
        if not isinstance(tau, JetPoint) or tau.d != d:
            raise TypeError("tau must be a JetPoint with d = %d" % d)
        _check_tau(c_tau, k_tau, d)
        functionals.append(_relabel(el_functional(tau, k_tau), 'EL_tau[%d]' % k_tau))
        rhs.append(float(c_tau))
    return ConstraintSet(functionals, rhs, kind=LagrangianKind.CONTINUOUS, n_data=len(data))


def build_constraints_discrete(data, xbar_b, p_b, c_b, variant=MomentumVariant.DISCRETE_MINUS, d=None,
                               tau=None, c_tau=1.0, k_tau=0):
    """
    DEL components of every snapshot triple, then discrete momenta and evaluation at
    x̄_b = (x0_b, x1_b), then optionally (DEL(L_d)(τ))_k = c_τ for a triple τ off the
    discrete motions
    """
    data = list(data)
    if not all(isinstance(triple, SnapshotTriple) for triple in data):
        raise TypeError("discrete training data must be SnapshotTriples")
    variant = MomentumVariant(variant)
    if variant.kind is not LagrangianKind.DISCRETE:
        raise ValueError("discrete constraints need a discrete momentum variant")
    d = data[0].d if data else (d or PhasePoint(getattr(xbar_b, 'coords', xbar_b)).d)
    _warn_duplicates([np.concatenate([t.x0, t.x1, t.x2]) for t in data])
    functionals = [del_functional(triple, k) for triple in data for k in range(d)]
    rhs = [0.0] * len(functionals)
    norm_functionals, norm_rhs = _normalisation(xbar_b, p_b, c_b, variant, d)
    functionals, rhs = functionals + norm_functionals, rhs + norm_rhs
    if tau is not None:
        if not isinstance(tau, SnapshotTriple) or tau.d != d:
            raise TypeError("tau must be a SnapshotTriple with d = %d" % d)
        _check_tau(c_tau, k_tau, d)
        functionals.append(_relabel(del_functional(tau, k_tau), 'DEL_tau[%d]' % k_tau))
        rhs.append(float(c_tau))
    return ConstraintSet(functionals, rhs, kind=LagrangianKind.DISCRETE, n_data=len(data))


def _row_blocks(owner, n_functionals, block_terms):
    """contiguous functional ranges holding roughly block_terms terms each"""
    starts = np.searchsorted(owner, np.arange(n_functionals + 1))
    blocks = []
    first = 0
    while first < n_functionals:
        last = first + 1
        while last < n_functionals and starts[last + 1] - starts[first] <= block_terms:
            last += 1
        blocks.append((first, last, starts[first], starts[last]))
        first = last
    return blocks


def choose_method(constraints, K, method='auto', cover_points=None, max_features=MAX_FEATURES):
    """
    'eigh' or 'features' for a constraint set

    'auto' takes the features when the phase space has at most FEATURE_MAX_DIM
    coordinates and the truncation needs at most max_features of them.
    """
    if method not in METHODS:
        raise ValueError("unknown solver method {}".format(method))
    if method == 'eigh' or not len(constraints):
        return 'eigh'
    _, points, _, _ = constraints.term_arrays()
    if cover_points is not None:
        points = np.vstack([points, np.atleast_2d(cover_points)])
    degree, radius = feature_plan(points, K.lengthscale)
    count = feature_count(K.dim, degree)
    if method == 'features':
        if count > max_features:
            raise ValueError("%d features (degree %d, radius %.3g) exceed max_features = %d"
                             % (count, degree, radius, max_features))
        return 'features'
    chosen = 'features' if K.dim <= FEATURE_MAX_DIM and count <= max_features else 'eigh'
    logger.debug("solver method {} ({} features of degree {} would cover radius {:.3g})", chosen, count, degree,
                 radius)
    return chosen


def assemble_theta(constraints, K, jitter=0.0, rtol=None, n_workers=None, method='auto', cover_points=None,
                   max_features=MAX_FEATURES):
    """
    Gram matrix Θ_kl = φ_k¹φ_l²K of a constraint set

    Rows are assembled in blocks of functionals (optionally on a thread pool); every
    entry is computed by the same arithmetic regardless of the schedule. The upper
    triangle is mirrored to make Θ exactly symmetric.

    Parameters
    ----------
    constraints : ConstraintSet
    K : Kernel
    jitter : float
        added to the diagonal before factorization
    rtol : float, optional
        relative eigenvalue cutoff of the pseudo-inverse, DEFAULT_RTOL of the method when None
    n_workers : int, optional
        threads used for the row blocks, serial when None or 1
    method : str
        'eigh' (eigendecomposition of Θ), 'features' (SVD of the feature factor) or 'auto'
    cover_points : array (P, 2d), optional
        points beyond the training terms where the feature model must be accurate
    max_features : int

    Returns
    -------
    GramSystem
    """
    if not isinstance(K, Kernel):
        raise TypeError("K must be a Kernel")
    n = len(constraints)
    if n and constraints.dim != K.dim:
        raise ValueError("constraints live in dimension %d, kernel in %d" % (constraints.dim, K.dim))
    method = choose_method(constraints, K, method, cover_points, max_features)
    weights, points, orders, owner = constraints.term_arrays()
    theta = np.zeros((n, n))
    if n:
        S = selection_matrix(weights, owner, n)
        block_terms = max(1, _BLOCK_ENTRIES // max(1, weights.size))
        blocks = _row_blocks(owner, n, block_terms)

        def assemble_rows(block):
            first, last, t0, t1 = block
            kmat = kernel_partial_matrix(K, points[t0:t1], orders[t0:t1], points, orders)
            right = np.asarray((S @ kmat.T).T)
            return first, last, np.asarray(S[first:last, t0:t1] @ right)

        if n_workers and n_workers > 1:
            with ThreadPoolExecutor(max_workers=n_workers) as pool:
                results = list(pool.map(assemble_rows, blocks))
        else:
            results = [assemble_rows(block) for block in blocks]
        for (first, last, rows) in results:
            theta[first:last] = rows
        theta = np.triu(theta) + np.triu(theta, 1).T
    if not np.all(np.isfinite(theta)):
        raise NonFiniteGramError("Θ contains non-finite entries")
    factor = build_factor(constraints, K, cover_points) if method == 'features' else None
    if factor is not None and not np.all(np.isfinite(factor.matrix)):
        raise NonFiniteGramError("the feature factor contains non-finite entries")
    rtol = DEFAULT_RTOL[method] if rtol is None else rtol
    gram = GramSystem(theta, kernel=K, jitter=jitter, rtol=rtol, factor=factor)
    logger.debug("assembled Θ of size {} in {} row blocks; spectrum {}", n,
                 len(blocks) if n else 0, gram.spectrum_summary())
    return gram


class PosteriorModel(object):
    """
    Trained model: constraint functionals, Gram system and weights z = Θ†y

    The posterior mean L_(M)(x̄) = Σ_t c_t ∂^{α_t}_1 K(p_t, x̄) with term coefficients
    c = Sᵀz, or Σ_α w_α ψ_α(x̄) when the Gram system carries a feature factor. The
    model exposes the same evaluation interface as AnalyticLagrangian (value,
    gradient, hessian, partial), so observables and dynamics accept either.
    """

    def __init__(self, kernel, constraints, weights, gram, kind=None):
        weights = np.array(weights, dtype=float).reshape(-1)
        if weights.size != len(constraints):
            raise ValueError("%d weights for %d constraints" % (weights.size, len(constraints)))
        self._kernel = kernel
        self._constraints = constraints
        self._weights = weights
        self._gram = gram
        self._kind = kind or constraints.kind
        t_weights, self._points, self._orders, owner = constraints.term_arrays()
        self._coefficients = t_weights * weights[owner] if weights.size else np.zeros(0)
        self._features = None
        self._feature_weights = None
        if gram is not None and gram.factor is not None and weights.size:
            self._features = gram.factor.features
            self._feature_weights = gram.feature_weights(constraints.rhs)
        self._outside = False
        self._query = derivative_indices(kernel.dim, 2)
        d = kernel.dim // 2
        self._d = d

    @property
    def kernel(self):
        return self._kernel

    @property
    def constraints(self):
        return self._constraints

    @property
    def weights(self):
        return self._weights

    @property
    def feature_weights(self):
        return self._feature_weights

    @property
    def gram(self):
        return self._gram

    @property
    def kind(self):
        return self._kind

    @property
    def d(self):
        return self._d

    @property
    def dim(self):
        return 2 * self._d

    def _check_cover(self, coords):
        if not self._outside and not self._features.covers(coords):
            self._outside = True
            logger.warning("evaluating the feature model at |x̄|/ℓ = {:.3g} beyond its radius {:.3g}",
                           float(np.linalg.norm(coords)) / self._kernel.lengthscale, self._features.radius)

    def _derivatives(self, coords, betas):
        if not self._coefficients.size:
            return np.zeros(len(betas))
        if self._features is not None:
            self._check_cover(coords)
            return self._features.matrix(np.tile(coords, (len(betas), 1)), betas) @ self._feature_weights
        kmat = kernel_derivatives_at(self._kernel, self._points, self._orders, coords, betas)
        return self._coefficients @ kmat

    def partials(self, points, orders):
        """
        ∂^{β_q} L_(M)(x̄_q) for many (x̄_q, β_q) at once

        Parameters
        ----------
        points : array (Q, 2d)
        orders : integer array (Q, 2d)

        Returns
        -------
        np.ndarray, shape (Q,)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        orders = np.atleast_2d(np.asarray(orders, dtype=int))
        out = np.zeros(points.shape[0])
        if not self._coefficients.size or not points.size:
            return out
        if self._features is not None:
            for p in points:
                self._check_cover(p)
            chunk = max(1, _BLOCK_ENTRIES // self._features.size)
        else:
            chunk = max(1, _BLOCK_ENTRIES // self._coefficients.size)
        for first in range(0, points.shape[0], chunk):
            block = slice(first, first + chunk)
            if self._features is not None:
                out[block] = self._features.matrix(points[block], orders[block]) @ self._feature_weights
            else:
                kmat = kernel_partial_matrix(self._kernel, self._points, self._orders, points[block], orders[block])
                out[block] = self._coefficients @ kmat
        return out

    def _batched(self, coords, fn):
        coords = np.asarray(getattr(coords, 'coords', coords), dtype=float)
        if coords.shape[-1] != self.dim:
            raise ValueError("expected points with %d coordinates, got %d" % (self.dim, coords.shape[-1]))
        if coords.ndim == 1:
            return fn(coords)
        flat = coords.reshape(-1, self.dim)
        out = np.array([fn(c) for c in flat])
        return out.reshape(coords.shape[:-1] + out.shape[1:])

    def partial(self, index, coords):
        """
        ∂^index of the posterior mean, total order <= 2
        """
        orders = np.asarray(getattr(index, 'orders', index), dtype=int).reshape(1, -1)
        return self._batched(coords, lambda c: float(self._derivatives(c, orders)[0]))

    def value(self, coords):
        return self.partial(np.zeros(self.dim, dtype=int), coords)

    def gradient(self, coords):
        n = self.dim
        betas = self._query[1:n + 1]
        return self._batched(coords, lambda c: self._derivatives(c, betas))

    def hessian(self, coords):
        n = self.dim
        betas = self._query[n + 1:]
        iu = np.triu_indices(n)

        def full(c):
            h = np.empty((n, n))
            vals = self._derivatives(c, betas)
            h[iu] = vals
            h.T[iu] = vals
            return h
        return self._batched(coords, full)

    def jet(self, coords):
        """
        value, gradient and Hessian from one kernel sweep
        """
        coords = np.asarray(getattr(coords, 'coords', coords), dtype=float)
        n = self.dim
        vals = self._derivatives(coords, self._query)
        h = np.empty((n, n))
        iu = np.triu_indices(n)
        h[iu] = vals[n + 1:]
        h.T[iu] = vals[n + 1:]
        return vals[0], vals[1:n + 1], h

    def __repr__(self):
        return 'PosteriorModel(%s, M=%d, %d constraints, %s)' % (self._kind.value, self._constraints.n_data,
                                                                 len(self._constraints), self._gram.method)


def _solve(g, c, refine):
    y = np.asarray(c.rhs)
    z = g.pinv_apply(y) if g.size else np.zeros(0)
    if refine and g.size and g.factor is None:
        z = z + g.pinv_apply(y - g.theta @ z)
    model = PosteriorModel(g.kernel, c, z, g)
    if not g.size:
        return model, 0.0
    if g.factor is not None:
        return model, float(np.linalg.norm(g.factor.matrix @ model.feature_weights - y))
    return model, float(np.linalg.norm(g.theta @ z - y))


def solve_posterior(g, c, range_tol=1e-8, refine=True, adapt=False):
    """
    Weights z = Θ†y of the posterior mean

    Parameters
    ----------
    g : GramSystem
    c : ConstraintSet
    range_tol : float
        InconsistentConstraintsError when ‖Φ(L_(M)) - y‖ > range_tol·max(1, ‖y‖)
    refine : bool
        one step of iterative refinement z += Θ†(y - Θz) on the eigendecomposition path
    adapt : bool
        on the eigendecomposition path, lower the cutoff along RTOL_LADDER until the
        residual is within min(range_tol, INTERPOLATION_TOL)·max(1, ‖y‖); the cutoff
        with the smallest residual is kept when none gets there

    Returns
    -------
    PosteriorModel
    """
    if g.size != len(c):
        raise ValueError("Gram system of size %d does not match %d constraints" % (g.size, len(c)))
    scale = max(1.0, float(np.linalg.norm(c.rhs)))
    target = min(range_tol, INTERPOLATION_TOL) * scale
    cutoffs = [g.rtol]
    if adapt and g.factor is None:
        cutoffs += [rtol for rtol in RTOL_LADDER if rtol < g.rtol]
    model, residual = None, np.inf
    for rtol in cutoffs:
        candidate, r = _solve(g if rtol == g.rtol else g.with_rtol(rtol), c, refine)
        if r < residual:
            model, residual = candidate, r
        if residual <= target:
            break
        logger.debug("residual {:.3e} with cutoff {:.0e}", r, rtol)
    if residual > range_tol * scale:
        raise InconsistentConstraintsError(
            "rhs is not in the range of Θ: residual %.3e exceeds %.1e·%.3g" % (residual, range_tol, scale))
    logger.debug("solved for {} weights ({}, cutoff {:.0e}), residual {:.3e}", len(c), model.gram.method,
                 model.gram.rtol, residual)
    return model


def mean_partial(m, alpha, xbar):
    """
    ∂^α L_(M)(x̄), |α| <= 2
    """
    return m.partial(alpha, xbar)


def functional_values(m, functionals):
    """
    φ(L_(M)) for a list of functionals, from one batched sweep over their terms
    """
    functionals = list(functionals)
    if not functionals:
        return np.zeros(0)
    weights, points, orders, owner = stack_terms(functionals)
    return np.asarray(selection_matrix(weights, owner, len(functionals)) @ m.partials(points, orders))


def _cross_gram(m, psis):
    """
    C[k, q] = φ_k¹ψ_q²K for all constraints k and functionals ψ_q
    """
    weights, points, orders, owner = m.constraints.term_arrays()
    p_weights, p_points, p_orders, p_owner = stack_terms(psis)
    S = selection_matrix(weights, owner, len(m.constraints))
    out = np.zeros((len(m.constraints), len(psis)))
    if not len(m.constraints):
        return out
    chunk = max(1, _BLOCK_ENTRIES // max(1, weights.size))
    starts = np.searchsorted(p_owner, np.arange(len(psis) + 1))
    first = 0
    while first < len(psis):
        last = first
        while last < len(psis) and starts[last + 1] - starts[first] <= chunk:
            last += 1
        last = max(last, first + 1)
        t0, t1 = starts[first], starts[last]
        kmat = kernel_partial_matrix(m.kernel, points, orders, p_points[t0:t1], p_orders[t0:t1])
        P = selection_matrix(p_weights[t0:t1], p_owner[t0:t1] - first, last - first)
        out[:, first:last] = np.asarray(S @ np.asarray(P @ kmat.T).T)
        first = last
    return out


def _feature_terms(m, psis):
    """
    rows ψ_q ψ of the features with their undetermined and jitter parts
    """
    f = m.gram.factor.features.apply(psis)
    residual, shrink = m.gram.feature_residuals(f)
    return f, residual, shrink


def _same_functional(psi, phi):
    if psi is phi:
        return True
    return (psi.n_terms == phi.n_terms and np.array_equal(psi.weights, phi.weights)
            and np.array_equal(psi.points, phi.points) and np.array_equal(psi.orders, phi.orders))


def _clamp(var, prior, clamp_tol):
    var = np.asarray(var, dtype=float)
    floor = -clamp_tol * np.maximum(1.0, prior)
    if np.any(var < floor):
        logger.warning("clamped {} negative posterior variances (min {:.3e})", int(np.sum(var < floor)), var.min())
    return np.maximum(var, 0.0)


def posterior_cov(m, psi, phi, clamp_tol=1e-8):
    """
    ψ𝒦_Φφ = ψ¹φ²K - (ψ𝒦Φᵀ) Θ† (Φ𝒦φ)

    With ψ = φ the result is a variance and is clamped at zero like posterior_variances.
    """
    prior = pair_bilinear(psi, phi, m.kernel)
    if not len(m.constraints):
        cov = prior
    elif m.gram.factor is not None:
        f, residual, shrink = _feature_terms(m, [psi, phi])
        cov = prior - float(f[0] @ f[1]) + float(residual[0] @ residual[1]) + float(shrink[0] @ shrink[1])
    else:
        cross = _cross_gram(m, [psi, phi])
        cov = prior - float(cross[:, 0] @ m.gram.pinv_apply(cross[:, 1]))
    if _same_functional(psi, phi):
        return float(_clamp(cov, prior, clamp_tol))
    return cov


def posterior_variances(m, psis, clamp_tol=1e-8):
    """
    Posterior variances of many functionals at once

    Values within clamp_tol·max(1, prior) below zero are clamped to zero; larger
    negative values are clamped as well and logged.

    Returns
    -------
    np.ndarray, shape (len(psis),)
    """
    psis = list(psis)
    if not psis:
        return np.zeros(0)
    prior = np.array([pair_bilinear(psi, psi, m.kernel) for psi in psis])
    if not len(m.constraints):
        var = prior
    elif m.gram.factor is not None:
        f, residual, shrink = _feature_terms(m, psis)
        var = (prior - np.sum(f * f, axis=1)) + np.sum(residual * residual, axis=1) + np.sum(shrink * shrink, axis=1)
    else:
        half = m.gram.half_pinv_apply(_cross_gram(m, psis))
        var = prior - np.sum(half * half, axis=0)
    return _clamp(var, prior, clamp_tol)


def rkhs_norm(m):
    """
    ‖L_(M)‖_U = sqrt(zᵀΘz), or ‖w‖ for a feature model
    """
    if not m.weights.size:
        return 0.0
    if m.feature_weights is not None:
        return float(np.linalg.norm(m.feature_weights))
    return float(np.sqrt(max(m.weights @ m.gram.theta @ m.weights, 0.0)))


def constraint_residuals(m):
    """
    Φ(L_(M)) - y, every constraint functional applied to the posterior mean
    """
    return functional_values(m, m.constraints.functionals) - m.constraints.rhs


def train(constraints, K, jitter=0.0, rtol=None, range_tol=1e-8, n_workers=None, method='auto', cover_points=None,
          max_features=MAX_FEATURES):
    """
    assemble Θ and solve for the posterior in one call

    Without an explicit rtol the eigendecomposition path adapts its cutoff (see solve_posterior).
    """
    gram = assemble_theta(constraints, K, jitter=jitter, rtol=rtol, n_workers=n_workers, method=method,
                          cover_points=cover_points, max_features=max_features)
    return solve_posterior(gram, constraints, range_tol=range_tol, adapt=rtol is None)
