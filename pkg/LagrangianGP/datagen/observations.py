"""
Training data of the continuous and discrete pipelines from analytic Lagrangians
"""

import numpy as np
from loguru import logger

from ..datastructures.phase_point import JetPoint, SnapshotTriple
from ..compute.dynamics import acceleration, midpoint_flow


def _rows(samples):
    return np.atleast_2d(np.asarray(getattr(samples, 'points', samples), dtype=float))


def gen_continuous_observations(L, samples):
    """
    Jets x̂ = (x, ẋ, g(x, ẋ)) with the exact acceleration of L at every sample point

    Parameters
    ----------
    L : AnalyticLagrangian
    samples : SampleSet or array (M, 2d)

    Returns
    -------
    list of JetPoint

    Raises
    ------
    DegenerateLagrangianError
        at a sample point where ∂²L/∂ẋ∂ẋ is singular
    """
    jets = [JetPoint(point, acceleration(L, point)) for point in _rows(samples)]
    logger.debug("generated {} continuous observations of {}", len(jets), L.name)
    return jets


def gen_discrete_observations(L, initial, dt, substeps=10, cfg=None):
    """
    Snapshot triples (x(0), x(Δt), x(2Δt)) of the midpoint flow of L

    Parameters
    ----------
    L : AnalyticLagrangian
        continuous Lagrangian generating the flow
    initial : SampleSet or array (M, 2d)
        initial data (x, p)
    dt : float
        snapshot spacing Δt
    substeps : int
        midpoint steps of size Δt/substeps between snapshots
    cfg : NewtonConfig, optional

    Returns
    -------
    list of SnapshotTriple
    """
    d = L.d
    triples = []
    for row in _rows(initial):
        snapshots = midpoint_flow(L, row[:d], row[d:], dt, 2, substeps=substeps, cfg=cfg).states
        triples.append(SnapshotTriple(*snapshots))
    logger.debug("generated {} discrete observations of {} with Δt = {} / {}", len(triples), L.name, dt, substeps)
    return triples
