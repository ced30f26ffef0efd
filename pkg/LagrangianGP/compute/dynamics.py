"""
Motions of continuous and discrete Lagrangians

acceleration / integrate : ẍ = g(x, ẋ) from EL(L) = 0, classical RK4
discrete_evolution       : x₂ from DEL(L_d)(x₀, x₁, x₂) = 0 by Newton's method
midpoint_*               : variational midpoint rule L_d = Δt·L((x₀+x₁)/2, (x₁-x₀)/Δt)
"""

import numpy as np
from loguru import logger

from ..datastructures.functional import LagrangianKind
from ..datastructures.analytic_lagrangian import AnalyticLagrangian
from ..datastructures.reports import NewtonConfig, Trajectory
from .exceptions import DegenerateLagrangianError, NewtonConvergenceError

# reciprocal condition number below which a matrix counts as singular
RCOND_MIN = 1e-12


def _rcond(matrix):
    with np.errstate(divide='ignore', invalid='ignore'):
        cond = np.linalg.cond(matrix)
    return 0.0 if not np.isfinite(cond) else 1.0 / cond


def _require(source, kind, what):
    if source.kind is not kind:
        raise ValueError("%s needs a %s Lagrangian, got %s" % (what, kind.value, source.kind.value))


def acceleration(source, xbar):
    """
    g(x, ẋ) = (∂²L/∂ẋ∂ẋ)⁻¹ (∂L/∂x - ∂²L/∂ẋ∂x·ẋ)

    Parameters
    ----------
    source : AnalyticLagrangian or PosteriorModel
    xbar : PhasePoint or array (x, ẋ)

    Returns
    -------
    np.ndarray, shape (d,)

    Raises
    ------
    DegenerateLagrangianError
        when 1/cond(∂²L/∂ẋ∂ẋ) < RCOND_MIN
    """
    _require(source, LagrangianKind.CONTINUOUS, "acceleration")
    coords = np.asarray(getattr(xbar, 'coords', xbar), dtype=float)
    d = source.d
    _, grad, hess = source.jet(coords)
    H = hess[d:, d:]
    if _rcond(H) < RCOND_MIN:
        raise DegenerateLagrangianError("∂²L/∂ẋ∂ẋ is singular at %s" % np.array2string(coords, precision=4))
    return np.linalg.solve(H, grad[:d] - hess[d:, :d] @ coords[d:])


def acceleration_field(source, points, skip_degenerate=False):
    """
    accelerations at an (N, 2d) array of points

    with skip_degenerate, degenerate points give NaN rows instead of raising
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty((points.shape[0], source.d))
    n_skipped = 0
    for i, point in enumerate(points):
        try:
            out[i] = acceleration(source, point)
        except DegenerateLagrangianError:
            if not skip_degenerate:
                raise
            out[i] = np.nan
            n_skipped += 1
    if n_skipped:
        logger.warning("skipped {} degenerate evaluation points out of {}", n_skipped, points.shape[0])
    return out


def integrate(source, x0, horizon, dt, region=None):
    """
    classical RK4 on (x, ẋ)' = (ẋ, g(x, ẋ)) with n = ceil(horizon/dt) equal steps

    Parameters
    ----------
    source : continuous Lagrangian
    x0 : PhasePoint or array (x, ẋ)
    horizon : float
    dt : float
        maximal step; the step used is horizon/n
    region : object with a `contains(points)` method, optional
        a warning is logged once when the trajectory leaves it

    Returns
    -------
    Trajectory
    """
    if not horizon > 0 or not dt > 0:
        raise ValueError("horizon and dt must be positive")
    state = np.array(getattr(x0, 'coords', x0), dtype=float)
    d = source.d
    n = int(np.ceil(round(horizon / dt, 9)))
    h = horizon / n

    def rhs(s):
        return np.concatenate([s[d:], acceleration(source, s)])

    states = np.empty((n + 1, state.size))
    states[0] = state
    left = False
    for k in range(n):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * h * k1)
        k3 = rhs(state + 0.5 * h * k2)
        k4 = rhs(state + h * k3)
        state = state + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        states[k + 1] = state
        if region is not None and not left and not region.contains(state):
            logger.warning("trajectory left the region at t = {:.4g}", (k + 1) * h)
            left = True
    logger.debug("integrated {} RK4 steps of size {:.3g}", n, h)
    return Trajectory(np.arange(n + 1) * h, states, kind=LagrangianKind.CONTINUOUS)


def newton_solve(residual, jacobian, x_init, cfg=None, scale=1.0):
    """
    Newton's method for residual(x) = 0

    Converged when ‖r‖ <= tol·scale. When the residual stops decreasing below
    sqrt(tol)·scale (floating-point floor of learned models), the best iterate
    is accepted.

    Returns
    -------
    x : np.ndarray
    history : list of float
        residual norms of all iterates
    """
    cfg = cfg or NewtonConfig()
    x = np.array(x_init, dtype=float)
    history = []
    best_x, best_r = x, np.inf
    for it in range(cfg.max_iter + 1):
        r = residual(x)
        norm = float(np.linalg.norm(r))
        history.append(norm)
        if norm < best_r:
            best_x, best_r = x, norm
        if norm <= cfg.tol * scale:
            return x, history
        if len(history) > 1 and norm >= history[-2] and best_r <= np.sqrt(cfg.tol) * scale:
            logger.debug("Newton stagnated at residual {:.3e} after {} iterations", best_r, it)
            return best_x, history
        if it == cfg.max_iter:
            break
        J = jacobian(x)
        if _rcond(J) < RCOND_MIN:
            raise DegenerateLagrangianError("singular Newton Jacobian (rcond %.2e)" % _rcond(J))
        x = x - np.linalg.solve(J, r)
    if best_r <= np.sqrt(cfg.tol) * scale:
        return best_x, history
    raise NewtonConvergenceError("no convergence in %d iterations, residual %.3e" % (cfg.max_iter, best_r))


def _fd_jacobian(residual, x, r0=None):
    step = 1e-6 * max(1.0, float(np.linalg.norm(x)))
    J = np.empty((x.size, x.size))
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        J[:, i] = (residual(x + e) - residual(x - e)) / (2 * step)
    return J


def discrete_evolution(source, x0, x1, cfg=None):
    """
    x₂ with ∇₂L_d(x₀, x₁) + ∇₁L_d(x₁, x₂) = 0, starting from 2x₁ - x₀

    The Jacobian is ∂²L_d/∂x₀∂x₁ at (x₁, x₂), or central finite differences of the
    residual when cfg.fd_jacobian is set.
    """
    _require(source, LagrangianKind.DISCRETE, "discrete evolution")
    cfg = cfg or NewtonConfig()
    x0 = np.asarray(x0, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    d = source.d
    p1 = source.gradient(np.concatenate([x0, x1]))[d:]

    def residual(x2):
        return p1 + source.gradient(np.concatenate([x1, x2]))[:d]

    if cfg.fd_jacobian:
        def jacobian(x2):
            return _fd_jacobian(residual, x2)
    else:
        def jacobian(x2):
            return source.hessian(np.concatenate([x1, x2]))[:d, d:]

    x2, history = newton_solve(residual, jacobian, 2 * x1 - x0, cfg, scale=1.0 + np.linalg.norm(p1))
    logger.trace("discrete step: {} Newton iterations, residual {:.2e}", len(history) - 1, history[-1])
    return x2


def check_nondegenerate(source, x0, x1):
    """
    rcond of ∂²L_d/∂x₀∂x₁ at (x₀, x₁)

    Raises
    ------
    DegenerateLagrangianError
        when it is below RCOND_MIN, so that no discrete step can be solved from the pair
    """
    _require(source, LagrangianKind.DISCRETE, "the nondegeneracy check")
    d = source.d
    pair = np.concatenate([np.asarray(x0, dtype=float), np.asarray(x1, dtype=float)])
    rcond = _rcond(source.hessian(pair)[:d, d:])
    if rcond < RCOND_MIN:
        raise DegenerateLagrangianError(
            "∂²L_d/∂x₀∂x₁ is singular at %s (rcond %.2e); the discrete Lagrangian does not determine "
            "the motion there" % (np.array2string(pair, precision=4), rcond))
    return rcond


def discrete_trajectory(source, x0, x1, n_steps, cfg=None, dt=None):
    """
    n_steps applications of discrete_evolution from the seed (x₀, x₁)

    Returns
    -------
    Trajectory of n_steps + 2 snapshots; times are k·dt (k when dt is None)
    """
    cfg = cfg or NewtonConfig()
    check_nondegenerate(source, x0, x1)
    snapshots = [np.asarray(x0, dtype=float), np.asarray(x1, dtype=float)]
    for _ in range(n_steps):
        snapshots.append(discrete_evolution(source, snapshots[-2], snapshots[-1], cfg))
    times = np.arange(len(snapshots)) * (1.0 if dt is None else dt)
    return Trajectory(times, np.array(snapshots), kind=LagrangianKind.DISCRETE)


def midpoint_discretisation(L, dt):
    """
    L_d(x₀, x₁) = Δt·L(m, v) with m = (x₀+x₁)/2 and v = (x₁-x₀)/Δt

    With J = [[I/2, I/2], [-I/Δt, I/Δt]] mapping (x₀, x₁) to (m, v):
    ∇L_d = Δt·Jᵀ∇L and ∇²L_d = Δt·Jᵀ∇²L J, all exact.

    Returns
    -------
    AnalyticLagrangian of kind DISCRETE
    """
    if not isinstance(L, AnalyticLagrangian) or L.kind is not LagrangianKind.CONTINUOUS:
        raise TypeError("the midpoint rule discretises a continuous AnalyticLagrangian")
    if not dt > 0:
        raise ValueError("dt must be positive")
    d = L.d
    eye = np.eye(d)
    J = np.block([[0.5 * eye, 0.5 * eye], [-eye / dt, eye / dt]])

    def to_mv(c):
        return c @ J.T

    def value(c):
        return dt * L.value(to_mv(c))

    def gradient(c):
        return dt * L.gradient(to_mv(c)) @ J

    def hessian(c):
        return dt * np.einsum('ai,...ab,bj->...ij', J, L.hessian(to_mv(c)), J)

    params = dict(L.params, dt=dt)
    return AnalyticLagrangian(value, gradient, hessian, d, name='midpoint(%s)' % L.name,
                              params=params, kind=LagrangianKind.DISCRETE)


def midpoint_step(L, x0, x1, dt, cfg=None):
    """
    one step of the variational midpoint rule of L with step dt
    """
    return discrete_evolution(midpoint_discretisation(L, dt), x0, x1, cfg)


def midpoint_first_step(L, x0, p0, dt, cfg=None):
    """
    x₁ with -∇₁L_d(x₀, x₁) = p₀ (discrete Legendre transform of the initial momentum)
    """
    cfg = cfg or NewtonConfig()
    Ld = midpoint_discretisation(L, dt)
    d = L.d
    x0 = np.asarray(x0, dtype=float)
    p0 = np.asarray(p0, dtype=float)
    _, grad, hess = L.jet(np.concatenate([x0, np.zeros(d)]))
    v0 = np.linalg.solve(hess[d:, d:], p0 - grad[d:])

    def residual(x1):
        return -Ld.gradient(np.concatenate([x0, x1]))[:d] - p0

    def jacobian(x1):
        return -Ld.hessian(np.concatenate([x0, x1]))[:d, d:]

    x1, _ = newton_solve(residual, jacobian, x0 + dt * v0, cfg, scale=1.0 + np.linalg.norm(p0))
    return x1


def midpoint_flow(L, x0, p0, dt, n_steps, substeps=1, cfg=None):
    """
    snapshots x(kΔt), k = 0..n_steps, of the midpoint rule with internal step Δt/substeps

    Returns
    -------
    Trajectory of kind DISCRETE
    """
    if substeps < 1 or n_steps < 0:
        raise ValueError("substeps must be >= 1 and n_steps >= 0")
    cfg = cfg or NewtonConfig()
    h = dt / substeps
    Ld = midpoint_discretisation(L, h)
    prev = np.asarray(x0, dtype=float)
    snapshots = [prev]
    if n_steps:
        cur = midpoint_first_step(L, prev, p0, h, cfg)
        for k in range(1, n_steps * substeps + 1):
            if k % substeps == 0:
                snapshots.append(cur)
            if k < n_steps * substeps:
                prev, cur = cur, discrete_evolution(Ld, prev, cur, cfg)
    return Trajectory(np.arange(len(snapshots)) * dt, np.array(snapshots), kind=LagrangianKind.DISCRETE)
