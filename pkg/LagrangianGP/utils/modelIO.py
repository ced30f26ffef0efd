"""
Read and write trained models (.npz) and the CSV artifacts of the experiments
"""
import json
import os

import numpy as np
import pandas as pd

from ..compute.features import TaylorFeatures, FeatureFactor
from ..compute.kernels import Kernel, KernelFamily
from ..compute.inference import PosteriorModel
from ..datastructures.functional import Functional, LagrangianKind
from ..datastructures.gram_system import ConstraintSet, GramSystem
from ..datastructures.phase_point import JetPoint, SnapshotTriple

MODEL_FORMAT_VERSION = 2

# version 1 files hold eigendecomposition models only
SUPPORTED_VERSIONS = (1, 2)

# decimal digits that round-trip float64
FLOAT_FORMAT = '%.17g'


def save_model(path, model, meta=None):
    """
    Write a PosteriorModel to a self-describing .npz archive

    Layout
    ------
    format_version : int
    header : JSON string with kernel family, lengthscale, dim, kind, d, n_data,
        functional labels, jitter, rtol, solver method (with the feature degree
        and radius of feature models) and the experiment metadata `meta`
    term_weights, term_points, term_orders, term_owner : stacked constraint terms
    rhs, z : right-hand side and weights
    theta, eigvals, eigvecs : Gram matrix and its eigendecomposition
    factor_matrix, singular_values, left, right : feature factor B and its SVD (feature models)

    Parameters
    ----------
    path : str
    model : PosteriorModel
    meta : dict, optional
        JSON-serialisable description of the training run (reference system, Δt, region)
    """
    constraints = model.constraints
    gram = model.gram
    weights, points, orders, owner = constraints.term_arrays()
    header = {'kernel_family': model.kernel.family.value,
              'lengthscale': model.kernel.lengthscale,
              'dim': model.kernel.dim,
              'kind': model.kind.value,
              'd': model.d,
              'n_data': constraints.n_data,
              'labels': constraints.labels,
              'jitter': gram.jitter,
              'rtol': gram.rtol,
              'method': gram.method,
              'meta': meta or {}}
    arrays = {'term_weights': weights,
              'term_points': points,
              'term_orders': orders,
              'term_owner': owner,
              'rhs': np.asarray(constraints.rhs),
              'z': model.weights,
              'theta': gram.theta,
              'eigvals': gram.eigvals,
              'eigvecs': gram.eigvecs}
    if gram.factor is not None:
        factor = gram.factor
        header['feature_degree'] = factor.features.degree
        header['feature_radius'] = factor.features.radius
        arrays.update(factor_matrix=factor.matrix, singular_values=factor.singular_values, left=factor.left,
                      right=factor.right)
    with open(path, 'wb') as f:
        np.savez(f, format_version=np.array(MODEL_FORMAT_VERSION), header=np.array(json.dumps(header)), **arrays)


def _factor(header, arrays):
    if header.get('method', 'eigh') != 'features':
        return None
    features = TaylorFeatures(header['dim'], header['lengthscale'], header['feature_degree'],
                              radius=header['feature_radius'])
    return FeatureFactor(features, arrays['factor_matrix'], singular_values=arrays['singular_values'],
                         left=arrays['left'], right=arrays['right'])


def load_model(path):
    """
    Read a model written by save_model

    Returns
    -------
    PosteriorModel evaluating identically to the saved one
    """
    with np.load(path, allow_pickle=False) as archive:
        version = int(archive['format_version'])
        if version not in SUPPORTED_VERSIONS:
            raise ValueError('model format version {} is not supported'.format(version))
        header = json.loads(str(archive['header']))
        arrays = {key: archive[key] for key in archive.files if key not in ('format_version', 'header')}
    kernel = Kernel(header['dim'], header['lengthscale'], KernelFamily(header['kernel_family']))
    kind = LagrangianKind(header['kind'])
    owner = arrays['term_owner']
    functionals = []
    for (k, label) in enumerate(header['labels']):
        rows = owner == k
        functionals.append(Functional(arrays['term_weights'][rows], arrays['term_points'][rows],
                                      arrays['term_orders'][rows], label=label))
    constraints = ConstraintSet(functionals, arrays['rhs'], kind=kind, n_data=header['n_data'])
    gram = GramSystem(arrays['theta'], kernel=kernel, jitter=header['jitter'], rtol=header['rtol'],
                      eigvals=arrays['eigvals'], eigvecs=arrays['eigvecs'], factor=_factor(header, arrays))
    return PosteriorModel(kernel, constraints, arrays['z'], gram, kind=kind)


def write_csv(frame, path):
    """
    Write a DataFrame with full float precision and no index column
    """
    out_dir = os.path.dirname(path)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


def _names(prefix, d):
    return ['{}{}'.format(prefix, i + 1) for i in range(d)]


def trajectory_frame(trajectory):
    """
    columns t,x1..xd,v1..vd (continuous) or k,x1..xd (discrete)
    """
    d = trajectory.d
    if trajectory.kind is LagrangianKind.CONTINUOUS:
        frame = pd.DataFrame(trajectory.states, columns=_names('x', d) + _names('v', d))
        frame.insert(0, 't', trajectory.times)
    else:
        frame = pd.DataFrame(trajectory.states, columns=_names('x', d))
        frame.insert(0, 'k', np.arange(len(trajectory)))
    return frame


def jets_frame(jets):
    """
    continuous observations: columns x1..xd,v1..vd,a1..ad
    """
    d = jets[0].d if jets else 0
    rows = [np.concatenate([jet.base.coords, jet.accel]) for jet in jets]
    return pd.DataFrame(np.array(rows).reshape(len(jets), 3 * d),
                        columns=_names('x', d) + _names('v', d) + _names('a', d))


def triples_frame(triples):
    """
    discrete observations: columns x0_1..x0_d,x1_1..x1_d,x2_1..x2_d
    """
    d = triples[0].d if triples else 0
    rows = [np.concatenate([t.x0, t.x1, t.x2]) for t in triples]
    columns = _names('x0_', d) + _names('x1_', d) + _names('x2_', d)
    return pd.DataFrame(np.array(rows).reshape(len(triples), 3 * d), columns=columns)


def read_observations(path):
    """
    Read an observation CSV written by jets_frame or triples_frame

    Returns
    -------
    list of JetPoint or list of SnapshotTriple, depending on the header
    """
    frame = pd.read_csv(path)
    values = frame.to_numpy(dtype=float)
    d = values.shape[1] // 3
    if values.shape[1] != 3 * d:
        raise ValueError('observation file {} has {} columns, expected 3d'.format(path, values.shape[1]))
    if frame.columns[0] == 'x0_1':
        return [SnapshotTriple(row[:d], row[d:2 * d], row[2 * d:]) for row in values]
    return [JetPoint(row[:2 * d], row[2 * d:]) for row in values]


def model_meta(path):
    """
    experiment metadata stored with a model
    """
    with np.load(path, allow_pickle=False) as archive:
        return json.loads(str(archive['header'])).get('meta', {})
