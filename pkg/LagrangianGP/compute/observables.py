"""
Geometric observables of continuous and discrete Lagrangians

Sources are AnalyticLagrangians or trained PosteriorModels; both expose `jet`
(value, gradient, Hessian at a point) and `kind`. Variances are available for the
linear observables of PosteriorModels only and are zero for analytic sources.
"""

import numpy as np

from ..datastructures.phase_point import PhasePoint, JetPoint, SnapshotTriple
from ..datastructures.functional import LagrangianKind, MomentumVariant
from ..datastructures.reports import ObservableReport, SymplecticMatrix
from .functionals import hamiltonian_functional, momentum_functional, symplectic_entry_functionals
from .inference import PosteriorModel, posterior_variances


def _point(xbar, d=None):
    xbar = xbar if isinstance(xbar, PhasePoint) else PhasePoint(xbar)
    if d is not None and xbar.d != d:
        raise ValueError("point has d = %d, Lagrangian has d = %d" % (xbar.d, d))
    return xbar


def _require(source, kind, what):
    if source.kind is not kind:
        raise ValueError("%s needs a %s Lagrangian, got %s" % (what, kind.value, source.kind.value))


def _variances(source, functionals, with_variance):
    if not with_variance or not isinstance(source, PosteriorModel):
        return np.zeros(len(functionals))
    return posterior_variances(source, functionals)


def hamiltonian(source, xbar, with_variance=False):
    """
    Ham(L)(x̄) = ẋᵀ∂L/∂ẋ(x̄) - L(x̄)

    Parameters
    ----------
    source : AnalyticLagrangian or PosteriorModel
        continuous Lagrangian
    xbar : PhasePoint or array-like (x, ẋ)
    with_variance : bool
        posterior variance of the Hamiltonian functional (models only)

    Returns
    -------
    ObservableReport with scalar value and variance
    """
    _require(source, LagrangianKind.CONTINUOUS, "the Hamiltonian")
    xbar = _point(xbar, source.d)
    value, grad, _ = source.jet(xbar.coords)
    ham = float(xbar.v @ grad[source.d:] - value)
    var = _variances(source, [hamiltonian_functional(xbar)], with_variance)
    return ObservableReport(ham, var[0])


def momenta(source, xbar, variant=None, with_variance=False):
    """
    Conjugate momenta: ∂L/∂ẋ (continuous), -∇₁L_d (DiscreteMinus) or ∇₂L_d (DiscretePlus)

    variant defaults to Continuous for continuous sources and DiscreteMinus for discrete ones
    """
    if variant is None:
        variant = MomentumVariant.CONTINUOUS if source.kind is LagrangianKind.CONTINUOUS \
            else MomentumVariant.DISCRETE_MINUS
    variant = MomentumVariant(variant)
    if variant.kind is not source.kind:
        raise ValueError("momentum variant %s does not fit a %s Lagrangian" % (variant.value, source.kind.value))
    d = source.d
    xbar = _point(xbar, d)
    _, grad, _ = source.jet(xbar.coords)
    p = -grad[:d] if variant is MomentumVariant.DISCRETE_MINUS else grad[d:]
    var = _variances(source, [momentum_functional(xbar, k, variant) for k in range(d)], with_variance)
    return ObservableReport(np.array(p, dtype=float), var)


def discrete_momenta(source, pair, variant=MomentumVariant.DISCRETE_MINUS, with_variance=False):
    """
    p₀ = -∇₁L_d(x₀, x₁) or p₁ = ∇₂L_d(x₀, x₁)
    """
    _require(source, LagrangianKind.DISCRETE, "discrete momenta")
    return momenta(source, pair, variant, with_variance)


def _symplectic_entries(source, xbar):
    d = source.d
    _, _, hess = source.jet(xbar.coords)
    if source.kind is LagrangianKind.CONTINUOUS:
        C = hess[:d, d:]
        B = hess[d:, d:]
        return np.block([[C.T - C, B], [-B, np.zeros((d, d))]])
    D = hess[d:, :d]
    return np.block([[np.zeros((d, d)), -D.T], [D, np.zeros((d, d))]])


def symplectic_form(source, xbar, with_variance=False):
    """
    Coordinate matrix W of Sympl(L) at x̄ in the frame (x, ẋ), or of Sympl(L_d) in (x₀, x₁)

    Returns
    -------
    SymplecticMatrix; with_variance adds the entrywise posterior variance
    """
    xbar = _point(xbar, source.d)
    entries = _symplectic_entries(source, xbar)
    variance = None
    if with_variance:
        functionals = symplectic_entry_functionals(xbar, source.kind)
        flat = [(a, b, phi) for (a, row) in enumerate(functionals) for (b, phi) in enumerate(row) if phi is not None]
        var = _variances(source, [phi for (_, _, phi) in flat], True)
        variance = np.zeros_like(entries)
        for (a, b, _), v in zip(flat, var):
            variance[a, b] = v
    return SymplecticMatrix(entries, kind=source.kind, variance=variance)


def _pullback(J):
    """
    Jᵀ W₀ J for the canonical form W₀ = [[0, I], [-I, 0]] on (x, p)
    """
    d = J.shape[0] // 2
    canonical = np.block([[np.zeros((d, d)), np.eye(d)], [-np.eye(d), np.zeros((d, d))]])
    return J.T @ canonical @ J


def discrete_symplectic_form(source, pair, side='minus'):
    """
    Pull-back of the canonical form by the discrete Legendre map

        minus: (x₀, x₁) -> (x₀, -∇₁L_d(x₀, x₁))
        plus:  (x₀, x₁) -> (x₁,  ∇₂L_d(x₀, x₁))

    computed in full from the Hessian of L_d, including the symmetric blocks
    that cancel. Both sides agree for any smooth L_d.
    """
    _require(source, LagrangianKind.DISCRETE, "the discrete symplectic form")
    d = source.d
    pair = _point(pair, d)
    _, _, hess = source.jet(pair.coords)
    if side == 'minus':
        J = np.vstack([np.hstack([np.eye(d), np.zeros((d, d))]), -hess[:d, :]])
    elif side == 'plus':
        J = np.vstack([np.hstack([np.zeros((d, d)), np.eye(d)]), hess[d:, :]])
    else:
        raise ValueError("side must be 'minus' or 'plus', got %r" % (side,))
    return SymplecticMatrix(_pullback(J), kind=LagrangianKind.DISCRETE)


def volume_density(source, xbar):
    """
    det(∂²L/∂ẋ∂ẋ) for continuous, det(∂²L_d/∂x₁∂x₀) for discrete Lagrangians (signed)
    """
    d = source.d
    xbar = _point(xbar, d)
    _, _, hess = source.jet(xbar.coords)
    if source.kind is LagrangianKind.CONTINUOUS:
        return float(np.linalg.det(hess[d:, d:]))
    return float(np.linalg.det(hess[d:, :d]))


def el_residual(source, jet):
    """
    EL(L)(x̂) as a vector of length d
    """
    _require(source, LagrangianKind.CONTINUOUS, "the Euler-Lagrange residual")
    if not isinstance(jet, JetPoint):
        raise TypeError("el_residual expects a JetPoint")
    d = source.d
    _, grad, hess = source.jet(jet.base.coords)
    return hess[d:, d:] @ jet.accel + hess[d:, :d] @ jet.v - grad[:d]


def del_residual(source, triple):
    """
    DEL(L_d)(x₀, x₁, x₂) = ∇₂L_d(x₀, x₁) + ∇₁L_d(x₁, x₂)
    """
    _require(source, LagrangianKind.DISCRETE, "the discrete Euler-Lagrange residual")
    if not isinstance(triple, SnapshotTriple):
        raise TypeError("del_residual expects a SnapshotTriple")
    d = source.d
    _, g01, _ = source.jet(triple.first_pair.coords)
    _, g12, _ = source.jet(triple.second_pair.coords)
    return g01[d:] + g12[:d]


def hamiltonian_along(source, trajectory):
    """
    Ham(L) at every state of a continuous trajectory
    """
    return np.array([hamiltonian(source, state).value for state in trajectory.states])
