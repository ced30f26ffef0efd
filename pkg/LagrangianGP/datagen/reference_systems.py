"""
Analytic reference Lagrangians and gauge transformations

Gauge transforms act as L̃ = ρL + aᵀẋ + c on continuous Lagrangians and as
L̃_d = ρL_d + aᵀ(x₁ - x₀) + c on discrete ones (total derivative of F(x) = aᵀx).
"""

import numpy as np

from ..datastructures.functional import LagrangianKind, MomentumVariant
from ..datastructures.analytic_lagrangian import AnalyticLagrangian
from ..datastructures.phase_point import PhasePoint
from ..compute.observables import el_residual, del_residual


def mechanical_lagrangian(mass, potential, potential_grad, potential_hess, name='mechanical', params=None):
    """
    L(x, ẋ) = ½ẋᵀΛẋ - V(x)

    Parameters
    ----------
    mass : array-like (d, d)
        symmetric mass matrix Λ
    potential, potential_grad, potential_hess : callable
        V, ∇V and ∇²V acting on the last axis of x

    Returns
    -------
    AnalyticLagrangian
    """
    mass = np.atleast_2d(np.array(mass, dtype=float))
    d = mass.shape[0]
    if mass.shape != (d, d) or not np.allclose(mass, mass.T):
        raise ValueError("mass matrix must be square and symmetric")

    def value(c):
        x, v = c[..., :d], c[..., d:]
        return 0.5 * np.einsum('...i,ij,...j->...', v, mass, v) - potential(x)

    def gradient(c):
        x, v = c[..., :d], c[..., d:]
        return np.concatenate([-potential_grad(x), v @ mass], axis=-1)

    def hessian(c):
        x = c[..., :d]
        h = np.zeros(c.shape[:-1] + (2 * d, 2 * d))
        h[..., :d, :d] = -potential_hess(x)
        h[..., d:, d:] = mass
        return h

    return AnalyticLagrangian(value, gradient, hessian, d, name=name, params=params)


def coupled_oscillator(alpha=0.1):
    """
    L = ½‖ẋ‖² - ½‖x‖² + αx⁰x¹ (d = 2)
    """
    alpha = float(alpha)
    stiffness = np.array([[1.0, -alpha], [-alpha, 1.0]])

    def potential(x):
        return 0.5 * np.einsum('...i,ij,...j->...', x, stiffness, x)

    def potential_grad(x):
        return x @ stiffness

    def potential_hess(x):
        return np.broadcast_to(stiffness, x.shape[:-1] + (2, 2))

    return mechanical_lagrangian(np.eye(2), potential, potential_grad, potential_hess,
                                 name='coupled_oscillator', params={'alpha': alpha})


def harmonic_oscillator_1d(omega=1.0):
    """
    L = ½ẋ² - ½ω²x²
    """
    k = float(omega) ** 2
    return mechanical_lagrangian(np.eye(1),
                                 lambda x: 0.5 * k * x[..., 0] ** 2,
                                 lambda x: k * x,
                                 lambda x: np.full(x.shape[:-1] + (1, 1), k),
                                 name='harmonic_oscillator_1d', params={'omega': float(omega)})


def free_particle(d=1, mass=1.0):
    """
    L = ½m‖ẋ‖²
    """
    return mechanical_lagrangian(float(mass) * np.eye(d),
                                 lambda x: np.zeros(x.shape[:-1]),
                                 lambda x: np.zeros(x.shape),
                                 lambda x: np.zeros(x.shape[:-1] + (d, d)),
                                 name='free_particle', params={'mass': float(mass)})


def constant_lagrangian(c, d=1, kind=LagrangianKind.CONTINUOUS):
    """
    L ≡ c
    """
    c = float(c)
    n = 2 * d
    return AnalyticLagrangian(lambda p: np.full(p.shape[:-1], c),
                              lambda p: np.zeros(p.shape),
                              lambda p: np.zeros(p.shape[:-1] + (n, n)),
                              d, name='constant', params={'c': c}, kind=kind)


class GaugeTransform(object):
    """
    (ρ, a, c) of L̃ = ρL + d_tF + c with linear F(x) = aᵀx
    only attributes with getters/setters can be assigned to this class
    """

    __rho = None
    __a = None
    __c = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, rho=1.0, a=None, c=0.0, d=None):
        super(GaugeTransform, self).__init__()
        if a is None:
            if d is None:
                raise ValueError("either a or d must be given")
            a = np.zeros(d)
        a = np.array(a, dtype=float).reshape(-1)
        a.flags.writeable = False
        self.__rho = float(rho)
        self.__a = a
        self.__c = float(c)

    @classmethod
    def identity(cls, d):
        return cls(1.0, np.zeros(d), 0.0)

    @property
    def rho(self):
        return self.__rho

    @property
    def a(self):
        return self.__a

    @property
    def c(self):
        return self.__c

    @property
    def d(self):
        return self.__a.size

    def __repr__(self):
        return 'GaugeTransform(rho=%g, a=%s, c=%g)' % (self.__rho, self.__a, self.__c)


def gauge_apply(L, g):
    """
    L̃ = ρL + aᵀẋ + c (continuous) or ρL_d + aᵀ(x₁ - x₀) + c (discrete)

    Returns
    -------
    AnalyticLagrangian of the same kind with consistently transformed partials
    """
    if g.d != L.d:
        raise ValueError("gauge has d = %d, Lagrangian has d = %d" % (g.d, L.d))
    d = L.d
    rho, a, c = g.rho, g.a, g.c
    if L.kind is LagrangianKind.CONTINUOUS:
        shift = np.concatenate([np.zeros(d), a])

        def linear(p):
            return p[..., d:] @ a
    else:
        shift = np.concatenate([-a, a])

        def linear(p):
            return (p[..., d:] - p[..., :d]) @ a

    return AnalyticLagrangian(lambda p: rho * L.value(p) + linear(p) + c,
                              lambda p: rho * L.gradient(p) + shift,
                              lambda p: rho * L.hessian(p),
                              d, name='gauge(%s)' % L.name,
                              params=dict(L.params, rho=rho, c=c), kind=L.kind)


def normalizing_gauge(L, xbar_b, c_b, p_b, tau, k=0, c_tau=1.0, variant=None):
    """
    Gauge transform making gauge_apply(L, g) satisfy the normalisation conditions

        L̃(x̄_b) = c_b,  Mm(L̃)(x̄_b) = p_b,  (EL(L̃)(τ))_k = c_τ

    with ρ = c_τ / (EL(L)(τ))_k and a = p_b - ρ·Mm(L)(x̄_b).

    Parameters
    ----------
    L : AnalyticLagrangian
    xbar_b : PhasePoint or array-like
        (x, ẋ) for continuous, (x₀, x₁) for discrete Lagrangians
    c_b : float
    p_b : array-like (d,)
    tau : JetPoint (continuous) or SnapshotTriple (discrete)
    k : int
        0-based EL component pinned to c_τ
    c_tau : float
        nonzero
    variant : MomentumVariant, optional
        discrete momentum used for p_b, DiscretePlus by default

    Raises
    ------
    ValueError
        when (EL(L)(τ))_k = 0
    """
    d = L.d
    xbar_b = xbar_b if isinstance(xbar_b, PhasePoint) else PhasePoint(xbar_b)
    p_b = np.array(p_b, dtype=float).reshape(-1)
    if L.kind is LagrangianKind.CONTINUOUS:
        residual = el_residual(L, tau)
    else:
        residual = del_residual(L, tau)
    if residual[k] == 0.0:
        raise ValueError("EL component %d vanishes at the reference jet; no equivalent normalised Lagrangian" % k)
    rho = float(c_tau) / residual[k]
    value, grad, _ = L.jet(xbar_b.coords)
    if L.kind is LagrangianKind.CONTINUOUS:
        a = p_b - rho * grad[d:]
        c = c_b - xbar_b.v @ a - rho * value
    else:
        variant = MomentumVariant(variant or MomentumVariant.DISCRETE_PLUS)
        if variant is MomentumVariant.DISCRETE_MINUS:
            p_ref = -grad[:d]
        elif variant is MomentumVariant.DISCRETE_PLUS:
            p_ref = grad[d:]
        else:
            raise ValueError("discrete Lagrangians need a discrete momentum variant")
        a = p_b - rho * p_ref
        c = c_b - rho * value - (xbar_b.second - xbar_b.first) @ a
    return GaugeTransform(rho, a, float(c))


def normalize_equivalent(L, xbar_b, c_b, p_b, tau, k=0, c_tau=1.0, variant=None):
    """
    gauge-equivalent Lagrangian satisfying the normalisation conditions exactly
    (see normalizing_gauge)
    """
    return gauge_apply(L, normalizing_gauge(L, xbar_b, c_b, p_b, tau, k, c_tau, variant))
