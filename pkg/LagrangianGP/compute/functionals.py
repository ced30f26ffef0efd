"""
Linear functionals used for training and uncertainty quantification

Every functional is a weighted sum of derivative evaluations (see Functional).
Component indices k are 0-based: k = 0 .. d-1.
"""

import numpy as np

from ..datastructures.phase_point import PhasePoint, JetPoint, SnapshotTriple
from ..datastructures.functional import Functional, LagrangianKind, MomentumVariant
from .kernels import kernel_partial_matrix, kernel_derivatives_at


def _unit_orders(dim, *indices):
    orders = np.zeros(dim, dtype=int)
    for i in indices:
        orders[i] += 1
    return orders


def _check_component(k, d):
    if not 0 <= k < d:
        raise IndexError("component index %d out of range for d = %d" % (k, d))


def el_functional(jet, k):
    """
    k-th Euler-Lagrange component at the jet x̂ = (x, ẋ, ẍ)

        EL_k(L)(x̂) = Σ_i ẍ^i ∂²L/∂ẋ^k∂ẋ^i + Σ_i ẋ^i ∂²L/∂ẋ^k∂x^i - ∂L/∂x^k

    Parameters
    ----------
    jet : JetPoint
    k : int
        0-based component

    Returns
    -------
    Functional with 2d second-order terms and one first-order term anchored at (x, ẋ)
    """
    if not isinstance(jet, JetPoint):
        raise TypeError("el_functional expects a JetPoint")
    d = jet.d
    dim = 2 * d
    _check_component(k, d)
    weights, orders = [], []
    for i in range(d):
        weights.append(jet.accel[i])
        orders.append(_unit_orders(dim, d + k, d + i))
    for i in range(d):
        weights.append(jet.v[i])
        orders.append(_unit_orders(dim, d + k, i))
    weights.append(-1.0)
    orders.append(_unit_orders(dim, k))
    points = np.tile(jet.base.coords, (len(weights), 1))
    return Functional(weights, points, orders, label='EL[%d]' % k)


def del_functional(triple, k):
    """
    k-th discrete Euler-Lagrange component (∇₂L_d(x0, x1))_k + (∇₁L_d(x1, x2))_k
    """
    if not isinstance(triple, SnapshotTriple):
        raise TypeError("del_functional expects a SnapshotTriple")
    d = triple.d
    _check_component(k, d)
    points = np.vstack([triple.first_pair.coords, triple.second_pair.coords])
    orders = np.vstack([_unit_orders(2 * d, d + k), _unit_orders(2 * d, k)])
    return Functional([1.0, 1.0], points, orders, label='DEL[%d]' % k)


def momentum_functional(xbar, k, variant=MomentumVariant.CONTINUOUS):
    """
    k-th conjugate momentum at x̄

    Continuous: ∂L/∂ẋ^k; DiscreteMinus: -∂L_d/∂x0^k; DiscretePlus: ∂L_d/∂x1^k
    """
    xbar = xbar if isinstance(xbar, PhasePoint) else PhasePoint(xbar)
    d = xbar.d
    _check_component(k, d)
    variant = MomentumVariant(variant)
    if variant is MomentumVariant.DISCRETE_MINUS:
        weight, orders = -1.0, _unit_orders(2 * d, k)
    else:
        weight, orders = 1.0, _unit_orders(2 * d, d + k)
    return Functional([weight], xbar.coords[None, :], orders[None, :],
                      label='Mm[%s,%d]' % (variant.value, k))


def eval_functional(xbar):
    """
    point evaluation L ↦ L(x̄)
    """
    xbar = xbar if isinstance(xbar, PhasePoint) else PhasePoint(xbar)
    return Functional([1.0], xbar.coords[None, :], np.zeros((1, xbar.dim), dtype=int), label='ev')


def raw_partial_functional(xbar, index):
    """
    L ↦ ∂^index L(x̄)
    """
    xbar = xbar if isinstance(xbar, PhasePoint) else PhasePoint(xbar)
    orders = np.asarray(getattr(index, 'orders', index), dtype=int).reshape(1, -1)
    return Functional([1.0], xbar.coords[None, :], orders, label='D%s' % list(orders[0]))


def hamiltonian_functional(xbar):
    """
    Ham(L)(x̄) = ẋᵀ ∂L/∂ẋ(x̄) - L(x̄)
    """
    xbar = xbar if isinstance(xbar, PhasePoint) else PhasePoint(xbar)
    d = xbar.d
    weights = list(xbar.v) + [-1.0]
    orders = [_unit_orders(2 * d, d + s) for s in range(d)] + [np.zeros(2 * d, dtype=int)]
    return Functional(weights, np.tile(xbar.coords, (d + 1, 1)), orders, label='Ham')


def symplectic_entry_functionals(xbar, kind=LagrangianKind.CONTINUOUS):
    """
    Functionals for every entry W[a, b] of the symplectic matrix at x̄

    Continuous, frame (x, ẋ):  W_xx = Cᵀ - C,  W_xẋ = B,  W_ẋx = -B,  W_ẋẋ = 0
    with C[r, s] = ∂²L/∂x^r∂ẋ^s and B[r, s] = ∂²L/∂ẋ^r∂ẋ^s.
    Discrete, frame (x0, x1):  W_10 = D,  W_01 = -Dᵀ  with D[s, r] = ∂²L_d/∂x1^s∂x0^r.

    Returns
    -------
    list of lists of Functional or None (None for identically zero entries)
    """
    xbar = xbar if isinstance(xbar, PhasePoint) else PhasePoint(xbar)
    d = xbar.d
    dim = 2 * d
    entries = [[None] * dim for _ in range(dim)]

    def second(weight_pairs, label):
        weights = [w for (w, _, _) in weight_pairs]
        orders = [_unit_orders(dim, i, j) for (_, i, j) in weight_pairs]
        return Functional(weights, np.tile(xbar.coords, (len(weights), 1)), orders, label=label)

    if kind is LagrangianKind.CONTINUOUS:
        for s in range(d):
            for r in range(d):
                if r != s:
                    entries[s][r] = second([(1.0, r, d + s), (-1.0, s, d + r)], 'Sympl[%d,%d]' % (s, r))
                entries[s][d + r] = second([(1.0, d + r, d + s)], 'Sympl[%d,%d]' % (s, d + r))
                entries[d + r][s] = second([(-1.0, d + r, d + s)], 'Sympl[%d,%d]' % (d + r, s))
    else:
        for s in range(d):
            for r in range(d):
                entries[d + s][r] = second([(1.0, d + s, r)], 'Sympl[%d,%d]' % (d + s, r))
                entries[r][d + s] = second([(-1.0, d + s, r)], 'Sympl[%d,%d]' % (r, d + s))
    return entries


def pair_left(phi, K, y):
    """
    φ applied to the first slot of K(·, ȳ): Σ weight·∂^index_1 K(point, ȳ)
    """
    y = np.asarray(getattr(y, 'coords', y), dtype=float)
    zero = np.zeros((1, K.dim), dtype=int)
    return float(phi.weights @ kernel_derivatives_at(K, phi.points, phi.orders, y, zero)[:, 0])


def pair_bilinear(phi, psi, K):
    """
    φ¹ψ²K = Σ_s Σ_t w_s w_t ∂^{α_s}_1 ∂^{β_t}_2 K(p_s, q_t)
    """
    if phi.dim != psi.dim:
        raise ValueError("functionals of dimension %d and %d cannot be paired" % (phi.dim, psi.dim))
    kmat = kernel_partial_matrix(K, phi.points, phi.orders, psi.points, psi.orders)
    return float(phi.weights @ kmat @ psi.weights)


def apply_functional(phi, source):
    """
    Apply φ to a Lagrangian source exposing value/gradient/hessian (analytic
    Lagrangians use their closed-form partials, models their mean partials)
    """
    total = 0.0
    for (w, point, orders) in zip(phi.weights, phi.points, phi.orders):
        if w == 0.0:
            continue
        total += w * float(source.partial(orders, point))
    return total
