"""
Drivers of the command-line experiments: one cmd_* per subcommand
"""

import os

import numpy as np
import pandas as pd
import yaml
from loguru import logger

from ..compute.dynamics import integrate, discrete_trajectory, midpoint_flow
from ..compute.inference import (build_constraints_continuous, build_constraints_discrete, train,
                                 constraint_residuals, rkhs_norm, shifted_jet, shifted_triple)
from ..compute.kernels import Kernel, KernelFamily
from ..datagen.observations import gen_continuous_observations, gen_discrete_observations
from ..datagen.reference_systems import coupled_oscillator, harmonic_oscillator_1d
from ..datagen.sampling import Box, halton
from ..datastructures.functional import LagrangianKind
from ..datastructures.phase_point import JetPoint, SnapshotTriple
from ..datastructures.reports import NewtonConfig
from ..utils.ConfigReader import ConfigReader, ConfigError
from ..utils.modelIO import (save_model, load_model, model_meta, write_csv, trajectory_frame, jets_frame,
                             triples_frame, read_observations)
from .gridProcess import uq_grid_frame, trajectory_diagnostics, convergence_table, fill_distance_table

MODEL_FILE = 'model.npz'


def _prepare_output(config):
    """create the output directory and store the resolved configuration in it"""
    out_dir = config.experiment.output_dir
    os.makedirs(out_dir, exist_ok=True)
    config.write_config(os.path.join(out_dir, 'config.yml'))
    return out_dir


def training_region(config, dim):
    region = config.training.region
    if region is None:
        return Box.cube(dim)
    if len(region) == 1:
        region = region * dim
    if len(region) != dim:
        raise ConfigError('training.region needs {} [low, high] pairs'.format(dim))
    return Box([lo for (lo, _) in region], [hi for (_, hi) in region])


def reference_system(config):
    if config.experiment.kind == 'convergence_1d':
        return harmonic_oscillator_1d()
    return coupled_oscillator(config.training.alpha)


def newton_config(config):
    return NewtonConfig(tol=config.dynamics.newton_tol, max_iter=config.dynamics.max_iter,
                        fd_jacobian=config.dynamics.fd_jacobian)


def kernel_from_config(config, dim):
    return Kernel(dim, config.kernel.lengthscale, KernelFamily(config.kernel.family))


def solver_options(config):
    return {'jitter': config.solver.jitter,
            'rtol': config.solver.rtol,
            'range_tol': config.solver.range_tol,
            'method': config.solver.method,
            'max_features': config.solver.max_features,
            'n_workers': config.solver.n_workers}


def load_observations(config, kind):
    """
    Observations stored at training.observations, checked against the experiment kind
    """
    path = config.training.observations
    try:
        data = read_observations(path)
    except (OSError, ValueError, pd.errors.ParserError) as e:
        raise ConfigError('cannot read observations {}: {}'.format(path, e))
    expected = SnapshotTriple if kind is LagrangianKind.DISCRETE else JetPoint
    if data and not isinstance(data[0], expected):
        raise ConfigError('observations {} do not hold {} training data'.format(path, kind.value))
    if data and data[0].d != reference_system(config).d:
        raise ConfigError('observations {} have d = {}, the experiment has d = {}'.format(
            path, data[0].d, reference_system(config).d))
    logger.info('read {} observations from {}', len(data), path)
    return data


def generate_observations(config):
    """
    Training data of the configured experiment from the first M Halton points of the region

    continuous : jets (x̄, g(L_ref)(x̄))
    discrete   : snapshot triples of the midpoint flow of L_ref started at Halton (x, p)
    """
    reference = reference_system(config)
    d = reference.d
    region = training_region(config, 2 * d)
    samples = halton(config.training.M, 2 * d, region)
    if config.experiment.kind == 'discrete_oscillator':
        return gen_discrete_observations(reference, samples, config.training.dt,
                                         substeps=config.training.substeps, cfg=newton_config(config))
    return gen_continuous_observations(reference, samples)


def _normalisation_point(config, data, kind, d):
    if config.training.xbar_b is not None:
        return np.array(config.training.xbar_b)
    if kind is LagrangianKind.CONTINUOUS or not data:
        return training_region(config, 2 * d).centre
    pairs = np.array([np.concatenate([t.x0, t.x1]) for t in data] + [np.concatenate([t.x1, t.x2]) for t in data])
    return 0.5 * (pairs.min(axis=0) + pairs.max(axis=0))


def non_motion_point(config, data, kind, xbar_b, d):
    """
    τ of the non-motion condition: the first observation moved off its motion in
    component training.tau_component by training.tau_shift (1 for jets, Δt for triples)
    """
    if config.training.c_tau is None:
        return None
    k = config.training.tau_component
    if kind is LagrangianKind.DISCRETE:
        shift = config.training.dt if config.training.tau_shift is None else config.training.tau_shift
        seed = data[0] if data else SnapshotTriple(xbar_b[:d], xbar_b[d:], 2 * xbar_b[d:] - xbar_b[:d])
        return shifted_triple(seed, k, shift)
    shift = 1.0 if config.training.tau_shift is None else config.training.tau_shift
    seed = data[0] if data else JetPoint(xbar_b, np.zeros(d))
    return shifted_jet(seed, k, shift)


def train_model(config, data=None):
    """
    Build the constraint set of the configured experiment and condition the Gaussian field on it

    The data are, in this order of precedence, `data`, the file training.observations
    or freshly generated observations.

    Returns
    -------
    model : PosteriorModel
    data : list of JetPoint or SnapshotTriple
    """
    reference = reference_system(config)
    d = reference.d
    kind = LagrangianKind.DISCRETE if config.experiment.kind == 'discrete_oscillator' else LagrangianKind.CONTINUOUS
    if data is None:
        data = load_observations(config, kind) if config.training.observations else generate_observations(config)
    xbar_b = np.asarray(_normalisation_point(config, data, kind, d), dtype=float)
    p_b = np.zeros(d) if config.training.p_b is None else np.array(config.training.p_b)
    tau = non_motion_point(config, data, kind, xbar_b, d)
    c_tau = 1.0 if config.training.c_tau is None else config.training.c_tau
    build = build_constraints_discrete if kind is LagrangianKind.DISCRETE else build_constraints_continuous
    constraints = build(data, xbar_b, p_b, config.training.c_b, d=d, tau=tau, c_tau=c_tau,
                        k_tau=config.training.tau_component)
    logger.info('training {} model on M = {} observations ({} constraints)', kind.value, len(data), len(constraints))
    region = training_region(config, 2 * d)
    corner = np.maximum(np.abs(region.lower), np.abs(region.upper))
    model = train(constraints, kernel_from_config(config, 2 * d), cover_points=corner, **solver_options(config))
    return model, data


def _meta(config):
    return {'experiment': config.experiment.kind,
            'alpha': config.training.alpha,
            'dt': config.training.dt,
            'substeps': config.training.substeps,
            'region': config.training.region}


def cmd_train(config):
    """
    Train and store the model; report constraint residual, Θ spectrum and RKHS norm

    Returns
    -------
    dict : the report written to train_report.yml
    """
    if config.experiment.kind not in ('continuous_oscillator', 'discrete_oscillator'):
        raise ConfigError('train needs a continuous_oscillator or discrete_oscillator experiment')
    out_dir = _prepare_output(config)
    model, data = train_model(config)
    save_model(os.path.join(out_dir, MODEL_FILE), model, meta=_meta(config))
    residuals = constraint_residuals(model)
    report = {'kind': model.kind.value,
              'M': len(data),
              'n_constraints': len(model.constraints),
              'max_constraint_residual': float(np.max(np.abs(residuals))) if residuals.size else 0.0,
              'rkhs_norm': rkhs_norm(model),
              'spectrum': model.gram.spectrum_summary()}
    with open(os.path.join(out_dir, 'train_report.yml'), 'w') as f:
        yaml.safe_dump(report, f, default_flow_style=False, sort_keys=False)
    logger.info('max constraint residual {:.3e}, RKHS norm {:.6g}', report['max_constraint_residual'],
                report['rkhs_norm'])
    return report


def _load(config, model_path):
    model_path = model_path or os.path.join(config.experiment.output_dir, MODEL_FILE)
    if not os.path.exists(model_path):
        raise ConfigError('model file {} does not exist; run train first'.format(model_path))
    try:
        return load_model(model_path), model_meta(model_path)
    except (OSError, KeyError, ValueError) as e:
        raise ConfigError('cannot read model file {}: {}'.format(model_path, e))


def _config_from_meta(config, meta):
    """reference parameters of the run that produced the model"""
    if 'experiment' in meta:
        config.set_field('experiment', 'kind', meta['experiment'])
    for key in ('alpha', 'dt', 'substeps', 'region'):
        if key in meta:
            config.set_field('training', key, meta[key])
    return config


def cmd_uq_grid(config, model_path=None):
    """
    Observable mean and variance over the configured slice, written to uq_grid_<observable>_<slice>.csv
    """
    model, meta = _load(config, model_path)
    config = _config_from_meta(config, meta)
    out_dir = _prepare_output(config)
    region = training_region(config, model.dim)
    frame = uq_grid_frame(model, config.evaluation.slice, config.evaluation.grid, region,
                          config.evaluation.observable, reference=reference_system(config),
                          dt=config.training.dt, substeps=config.training.substeps, cfg=newton_config(config))
    path = os.path.join(out_dir, 'uq_grid_{}_{}.csv'.format(config.evaluation.observable, config.evaluation.slice))
    write_csv(frame, path)
    logger.info('wrote {} grid points to {}', len(frame), path)
    return frame


def cmd_trajectory(config, model_path=None):
    """
    Motion of the learned model from dynamics.initial with per-point variance and the
    deviation from the reference motion

    continuous : RK4 over dynamics.horizon with step dynamics.dt, reference RK4 of L_ref
    discrete   : dynamics.steps evolution steps seeded by the first two snapshots of the
                 reference midpoint flow started at (x, p) = dynamics.initial

    Returns
    -------
    float : maximal position deviation from the reference
    """
    model, meta = _load(config, model_path)
    config = _config_from_meta(config, meta)
    out_dir = _prepare_output(config)
    reference = reference_system(config)
    d = model.d
    initial = np.array(config.dynamics.initial, dtype=float)
    if initial.size != 2 * d:
        raise ConfigError('dynamics.initial must have {} entries'.format(2 * d))
    region = training_region(config, model.dim)
    if model.kind is LagrangianKind.CONTINUOUS:
        learned = integrate(model, initial, config.dynamics.horizon, config.dynamics.dt, region=region)
        truth = integrate(reference, initial, config.dynamics.horizon, config.dynamics.dt)
    else:
        cfg = newton_config(config)
        truth = midpoint_flow(reference, initial[:d], initial[d:], config.training.dt, config.dynamics.steps + 1,
                              substeps=config.training.substeps, cfg=cfg)
        learned = discrete_trajectory(model, truth.states[0], truth.states[1], config.dynamics.steps, cfg,
                                      dt=config.training.dt)
    diagnostics = trajectory_diagnostics(model, learned, truth)
    write_csv(trajectory_frame(learned), os.path.join(out_dir, 'trajectory.csv'))
    write_csv(trajectory_frame(truth), os.path.join(out_dir, 'reference_trajectory.csv'))
    write_csv(diagnostics, os.path.join(out_dir, 'trajectory_diagnostics.csv'))
    deviation = float(np.nanmax(diagnostics['error']))
    logger.info('maximal deviation from the reference motion {:.3e}', deviation)
    return deviation


def cmd_convergence(config):
    """
    Relative acceleration errors of 1-d oscillator models for evaluation.M_list, written to convergence.csv
    """
    if config.experiment.kind != 'convergence_1d':
        raise ConfigError('convergence needs a convergence_1d experiment')
    out_dir = _prepare_output(config)
    reference = reference_system(config)
    p_b = None if config.training.p_b is None else np.array(config.training.p_b)
    if p_b is not None and p_b.size != reference.d:
        raise ConfigError('training.p_b must have {} entries'.format(reference.d))
    frame = convergence_table(reference, config.evaluation.M_list, training_region(config, 2 * reference.d),
                              config.evaluation.mesh, lengthscale=config.kernel.lengthscale,
                              c_b=config.training.c_b, p_b=p_b, c_tau=config.training.c_tau,
                              tau_shift=1.0 if config.training.tau_shift is None else config.training.tau_shift,
                              solver=solver_options(config))
    write_csv(frame, os.path.join(out_dir, 'convergence.csv'))
    return frame


def cmd_filldistance(config):
    """
    Uniform-mesh and Halton fill distances in [0, 1]^d', written to fill_distance.csv
    """
    out_dir = _prepare_output(config)
    frame = fill_distance_table(config.evaluation.fill_dims, config.evaluation.fill_max_M,
                                config.evaluation.probe_resolution)
    write_csv(frame, os.path.join(out_dir, 'fill_distance.csv'))
    return frame


def cmd_observe(config):
    """
    Generate the training observations of the configured experiment, written to observations.csv
    """
    if config.experiment.kind not in ('continuous_oscillator', 'discrete_oscillator', 'convergence_1d'):
        raise ConfigError('observe needs an experiment with training data')
    out_dir = _prepare_output(config)
    data = generate_observations(config)
    frame = triples_frame(data) if config.experiment.kind == 'discrete_oscillator' else jets_frame(data)
    write_csv(frame, os.path.join(out_dir, 'observations.csv'))
    logger.info('wrote {} observations', len(frame))
    return frame


COMMANDS = {'train': cmd_train,
            'uq-grid': cmd_uq_grid,
            'trajectory': cmd_trajectory,
            'convergence': cmd_convergence,
            'fill-distance': cmd_filldistance,
            'observe': cmd_observe}


def run_experiment(command, configfile=None, overrides=None, model_path=None):
    """
    Read the configuration and run one subcommand
    """
    config = ConfigReader(configfile, overrides)
    if command not in COMMANDS:
        raise ConfigError('unknown command {}'.format(command))
    if command in ('uq-grid', 'trajectory'):
        return COMMANDS[command](config, model_path)
    return COMMANDS[command](config)
