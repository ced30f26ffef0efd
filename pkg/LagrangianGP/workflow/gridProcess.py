"""
Evaluate trained models over slices, along trajectories and across sample sizes
"""

import numpy as np
import pandas as pd
from loguru import logger

from ..compute.dynamics import acceleration_field, discrete_evolution, midpoint_flow
from ..compute.functionals import (el_functional, del_functional, eval_functional, hamiltonian_functional,
                                   momentum_functional)
from ..compute.inference import build_constraints_continuous, train, posterior_variances, shifted_jet
from ..compute.kernels import Kernel
from ..compute.observables import hamiltonian, momenta
from ..datagen.observations import gen_continuous_observations
from ..datagen.sampling import Box, halton, uniform_mesh, fill_distance, uniform_fill_distance, probe_mesh
from ..datastructures.functional import LagrangianKind, MomentumVariant
from ..datastructures.phase_point import JetPoint, SnapshotTriple

SLICE_AXES = {'position': 'x', 'velocity': 'v'}


def slice_points(slice_name, grid, region):
    """
    Points of a 2-D slice of a 2d-dimensional box

    position : (u, v, 0, ..., 0), u along axis 0 and v along axis 1
    velocity : (u, 0, .., v, 0, ..), u along axis 0 and v along axis d (ẋ⁰ or p⁰)

    Returns
    -------
    u, v : np.ndarray (N,)
    points : np.ndarray (N, 2d)
    """
    dim = region.dim
    if slice_name not in SLICE_AXES:
        raise ValueError("unknown slice {}".format(slice_name))
    second = 1 if slice_name == 'position' else dim // 2
    u_axis = np.linspace(region.lower[0], region.upper[0], grid)
    v_axis = np.linspace(region.lower[second], region.upper[second], grid)
    uu, vv = np.meshgrid(u_axis, v_axis, indexing='ij')
    points = np.zeros((uu.size, dim))
    points[:, 0] = uu.reshape(-1)
    points[:, second] = vv.reshape(-1)
    if not np.all(region.contains(points)):
        logger.warning("the {} slice leaves the training region", slice_name)
    return uu.reshape(-1), vv.reshape(-1), points


def _component_columns(prefix, values):
    return {'{}_{}'.format(prefix, k + 1): values[:, k] for k in range(values.shape[1])}


def el_variance_grid(model, points):
    """
    posterior variance of EL(ξ) at the jets (x̄, g_x̄(L_(M))); degenerate points give NaN
    """
    d = model.d
    accels = acceleration_field(model, points, skip_degenerate=True)
    good = np.all(np.isfinite(accels), axis=1)
    variances = np.full((points.shape[0], d), np.nan)
    functionals = [el_functional(JetPoint(p, a), k) for (p, a) in zip(points[good], accels[good]) for k in range(d)]
    if functionals:
        variances[good] = posterior_variances(model, functionals).reshape(-1, d)
    return variances


def del_variance_grid(model, reference, points, dt, substeps, cfg=None):
    """
    posterior variance of DEL(ξ) at the triples of the reference flow started at (x, p)
    """
    d = model.d
    triples = [SnapshotTriple(*midpoint_flow(reference, p[:d], p[d:], dt, 2, substeps, cfg).states) for p in points]
    functionals = [del_functional(t, k) for t in triples for k in range(d)]
    return posterior_variances(model, functionals).reshape(-1, d), triples


def uq_grid_frame(model, slice_name, grid, region, observable, reference=None, dt=None, substeps=10, cfg=None):
    """
    Observable mean and posterior variance over a slice

    Columns are u, v and then
      EL / DEL    : variance_1..variance_d, variance (Euclidean norm of the component variances)
      Ham, value  : value, variance
      Mm          : value_1..value_d, variance_1..variance_d
      accel_error : value (‖g(L_(M)) - g(L_ref)‖, or the discrete-evolution error), variance (zero)

    Discrete models are evaluated over (x, p) slices whose triples come from the
    reference flow with snapshot spacing dt.
    """
    u, v, points = slice_points(slice_name, grid, region)
    columns = {'u': u, 'v': v}
    d = model.d
    if model.kind is LagrangianKind.DISCRETE and observable in ('EL', 'DEL', 'accel_error'):
        if reference is None or dt is None:
            raise ValueError("discrete grids need the reference system and Δt")
        var, triples = del_variance_grid(model, reference, points, dt, substeps, cfg)
        if observable == 'accel_error':
            errors = [np.linalg.norm(discrete_evolution(model, t.x0, t.x1, cfg) - t.x2) for t in triples]
            columns.update(value=np.array(errors), variance=np.zeros(len(errors)))
        else:
            columns.update(_component_columns('variance', var))
            columns['variance'] = np.linalg.norm(var, axis=1)
    elif observable in ('EL', 'DEL'):
        var = el_variance_grid(model, points)
        columns.update(_component_columns('variance', var))
        columns['variance'] = np.linalg.norm(var, axis=1)
    elif observable == 'Ham':
        columns['value'] = np.array([hamiltonian(model, p).value for p in points])
        columns['variance'] = posterior_variances(model, [hamiltonian_functional(p) for p in points])
    elif observable == 'value':
        columns['value'] = np.array([model.value(p) for p in points])
        columns['variance'] = posterior_variances(model, [eval_functional(p) for p in points])
    elif observable == 'Mm':
        values = np.array([momenta(model, p).value for p in points])
        variant = MomentumVariant.CONTINUOUS if model.kind is LagrangianKind.CONTINUOUS \
            else MomentumVariant.DISCRETE_MINUS
        var = posterior_variances(model, [momentum_functional(p, k, variant) for p in points for k in range(d)])
        columns.update(_component_columns('value', values))
        columns.update(_component_columns('variance', var.reshape(-1, d)))
    elif observable == 'accel_error':
        if reference is None:
            raise ValueError("acceleration errors need the reference system")
        columns['value'] = acceleration_error_grid(model, reference, points)
        columns['variance'] = np.zeros(points.shape[0])
    else:
        raise ValueError("unknown observable {}".format(observable))
    return pd.DataFrame(columns)


def acceleration_error_grid(model, reference, points, relative=False):
    """
    ‖g(L_(M))(x̄) - g(L_ref)(x̄)‖, divided by ‖g(L_ref)(x̄)‖ when relative

    NaN at points where the learned Lagrangian is degenerate, and in relative mode
    also where the reference acceleration vanishes.
    """
    learned = acceleration_field(model, points, skip_degenerate=True)
    truth = acceleration_field(reference, points)
    errors = np.linalg.norm(learned - truth, axis=1)
    if relative:
        norms = np.linalg.norm(truth, axis=1)
        still = norms == 0.0
        if np.any(still):
            logger.warning("{} points with vanishing reference acceleration left out of the relative error",
                           int(np.sum(still)))
        errors = np.divide(errors, norms, out=np.full_like(errors, np.nan), where=~still)
    return errors


def trajectory_diagnostics(model, trajectory, reference_trajectory=None):
    """
    Per-state diagnostics of a learned motion

    continuous : t, el_variance (‖var EL(ξ)‖ at (x̄, g(L_(M))(x̄))), hamiltonian, ham_drift
    discrete   : k, del_variance (‖var DEL(ξ)‖ at consecutive snapshots, NaN for the last two)
    both       : error (max-norm deviation from reference_trajectory) when given
    """
    d = model.d
    columns = {}
    if model.kind is LagrangianKind.CONTINUOUS:
        columns['t'] = trajectory.times
        var = el_variance_grid(model, trajectory.states)
        columns['el_variance'] = np.linalg.norm(var, axis=1)
        ham = np.array([hamiltonian(model, s).value for s in trajectory.states])
        columns['hamiltonian'] = ham
        columns['ham_drift'] = np.abs(ham - ham[0])
    else:
        columns['k'] = np.arange(len(trajectory))
        states = trajectory.states
        functionals = [del_functional(SnapshotTriple(states[j], states[j + 1], states[j + 2]), k)
                       for j in range(len(states) - 2) for k in range(d)]
        var = np.full(len(states), np.nan)
        if functionals:
            var[:-2] = np.linalg.norm(posterior_variances(model, functionals).reshape(-1, d), axis=1)
        columns['del_variance'] = var
    if reference_trajectory is not None:
        n = min(len(trajectory), len(reference_trajectory))
        error = np.full(len(trajectory), np.nan)
        error[:n] = np.max(np.abs(trajectory.positions[:n] - reference_trajectory.positions[:n]), axis=1)
        columns['error'] = error
    return pd.DataFrame(columns)


def convergence_table(reference, M_list, region, mesh, lengthscale=1.0, c_b=0.0, p_b=None, c_tau=1.0,
                      tau_shift=1.0, solver=None):
    """
    Maximal relative acceleration error of continuous models trained on the first
    M Halton points of the region, evaluated on a mesh[0] × mesh[1] uniform mesh

    The models are normalised at the region centre by (c_b, p_b) and, unless c_tau
    is None, by the non-motion condition at the first jet with ẍ⁰ moved by tau_shift.

    Returns
    -------
    DataFrame with columns M, h_fill, err_g, n_degenerate, slope
        slope is the log-log slope of err_g against M from the previous row
    """
    d = reference.d
    solver = solver or {}
    p_b = np.zeros(d) if p_b is None else p_b
    kernel = Kernel(2 * d, lengthscale)
    evaluation = uniform_mesh(list(mesh), region).points
    still = np.linalg.norm(acceleration_field(reference, evaluation), axis=1) == 0.0
    rows = []
    for M in M_list:
        samples = halton(M, 2 * d, region)
        jets = gen_continuous_observations(reference, samples)
        tau = shifted_jet(jets[0], 0, tau_shift) if c_tau is not None and jets else None
        constraints = build_constraints_continuous(jets, region.centre, p_b, c_b, tau=tau,
                                                   c_tau=1.0 if c_tau is None else c_tau)
        model = train(constraints, kernel, cover_points=evaluation, **solver)
        errors = acceleration_error_grid(model, reference, evaluation, relative=True)
        n_degenerate = int(np.sum(~np.isfinite(errors) & ~still))
        err = float(np.nanmax(errors)) if np.any(np.isfinite(errors)) else np.nan
        rows.append({'M': M, 'h_fill': fill_distance(samples), 'err_g': err, 'n_degenerate': n_degenerate})
        logger.info("M = {}: max relative acceleration error {:.3e} ({} degenerate points, {})", M, err,
                    n_degenerate, model.gram.method)
    frame = pd.DataFrame(rows)
    log_err = np.log(frame['err_g'].to_numpy(dtype=float))
    log_m = np.log(frame['M'].to_numpy(dtype=float))
    slope = np.full(len(frame), np.nan)
    slope[1:] = np.diff(log_err) / np.diff(log_m)
    frame['slope'] = slope
    return frame


def fill_distance_sizes(dim, max_M):
    """
    sample sizes of the fill-distance table: powers of two for dim 1, squares for dim 2
    """
    if dim == 1:
        return [2 ** k for k in range(1, int(np.log2(max_M)) + 1)]
    return [n ** dim for n in range(2, int(np.floor(max_M ** (1.0 / dim) + 1e-9)) + 1)]


def fill_distance_table(dims=(1, 2), max_M=400, resolution=100):
    """
    Fill distances of uniform meshes and Halton sets with M points in [0, 1]^d'

    Returns
    -------
    DataFrame with columns dim, M, h_uniform, h_uniform_formula, h_halton
    """
    rows = []
    for dim in dims:
        region = Box(np.zeros(dim), np.ones(dim))
        probe = probe_mesh(region, resolution)
        for M in fill_distance_sizes(dim, max_M):
            n = int(round(M ** (1.0 / dim)))
            rows.append({'dim': dim,
                         'M': M,
                         'h_uniform': fill_distance(uniform_mesh(n, region), probe),
                         'h_uniform_formula': uniform_fill_distance(n, region),
                         'h_halton': fill_distance(halton(M, dim, region), probe)})
    return pd.DataFrame(rows)

