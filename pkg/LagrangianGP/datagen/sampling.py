"""
Sample sets on axis-aligned boxes: Halton sequences, uniform meshes and fill distances
"""

from enum import Enum

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from ..datastructures.phase_point import PhasePoint

# prime bases available to the Halton generator
MAX_HALTON_DIM = 20


class SampleGenerator(Enum):
    HALTON = 'halton'
    UNIFORM_MESH = 'uniform_mesh'
    EXPLICIT = 'explicit'


class Box(object):
    """
    Axis-aligned box Ω = Π_i (lower_i, upper_i)
    only attributes with getters/setters can be assigned to this class
    """

    __lower = None
    __upper = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, lower, upper):
        super(Box, self).__init__()
        lower = np.array(lower, dtype=float).reshape(-1)
        upper = np.array(upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape or not lower.size:
            raise ValueError("lower and upper bounds must be nonempty and of equal length")
        if np.any(upper <= lower):
            raise ValueError("every upper bound must exceed its lower bound")
        lower.flags.writeable = False
        upper.flags.writeable = False
        self.__lower = lower
        self.__upper = upper

    @classmethod
    def cube(cls, dim, low=-1.0, high=1.0):
        return cls(np.full(dim, low), np.full(dim, high))

    @property
    def lower(self):
        return self.__lower

    @property
    def upper(self):
        return self.__upper

    @property
    def dim(self):
        return self.__lower.size

    @property
    def widths(self):
        return self.__upper - self.__lower

    @property
    def centre(self):
        return 0.5 * (self.__lower + self.__upper)

    def contains(self, points, tol=1e-12):
        """
        True where points lie in the closed box (up to tol); scalar for a single point
        """
        points = np.asarray(points, dtype=float)
        inside = np.all((points >= self.__lower - tol) & (points <= self.__upper + tol), axis=-1)
        return bool(inside) if np.ndim(inside) == 0 else inside

    def scale(self, unit_points):
        """map points of the unit cube into the box"""
        return qmc.scale(np.atleast_2d(unit_points), self.__lower, self.__upper)

    def __eq__(self, other):
        return isinstance(other, Box) and np.array_equal(self.__lower, other.lower) \
            and np.array_equal(self.__upper, other.upper)

    def __repr__(self):
        return 'Box(lower=%s, upper=%s)' % (self.__lower, self.__upper)


class SampleSet(object):
    """
    Points Ω₀ in a box Ω together with the generator that produced them
    """

    __points = None
    __generator = None
    __region = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, points, region, generator=SampleGenerator.EXPLICIT):
        super(SampleSet, self).__init__()
        points = np.array(points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, region.dim)
        if points.shape[1] != region.dim:
            raise ValueError("points have %d coordinates, region has %d" % (points.shape[1], region.dim))
        if points.size and not np.all(region.contains(points)):
            raise ValueError("all sample points must lie in the region")
        points.flags.writeable = False
        self.__points = points
        self.__region = region
        self.__generator = SampleGenerator(generator)

    @property
    def points(self):
        return self.__points

    @property
    def region(self):
        return self.__region

    @property
    def generator(self):
        return self.__generator

    @property
    def dim(self):
        return self.__region.dim

    def phase_points(self):
        return [PhasePoint(p) for p in self.__points]

    def __len__(self):
        return self.__points.shape[0]

    def __getitem__(self, item):
        return self.__points[item]

    def __repr__(self):
        return 'SampleSet(%s, n=%d, dim=%d)' % (self.__generator.value, len(self), self.dim)


def halton(n, dim, region=None):
    """
    First n points of the prime-base Halton sequence (index 1 onwards), mapped into region

    Parameters
    ----------
    n : int
    dim : int
        at most MAX_HALTON_DIM
    region : Box, optional
        unit cube when omitted

    Returns
    -------
    SampleSet
    """
    if not 0 < dim <= MAX_HALTON_DIM:
        raise ValueError("Halton sequences are available for 1 <= dim <= %d" % MAX_HALTON_DIM)
    if n < 0:
        raise ValueError("n must be nonnegative")
    region = region or Box(np.zeros(dim), np.ones(dim))
    if region.dim != dim:
        raise ValueError("region has dimension %d, requested %d" % (region.dim, dim))
    sampler = qmc.Halton(d=dim, scramble=False)
    sampler.fast_forward(1)
    unit = sampler.random(n) if n else np.zeros((0, dim))
    points = region.scale(unit) if n else unit
    return SampleSet(points, region, SampleGenerator.HALTON)


def _axes(n_per_axis, region):
    n_per_axis = np.broadcast_to(np.asarray(n_per_axis, dtype=int), (region.dim,))
    if np.any(n_per_axis < 1):
        raise ValueError("at least one mesh point per axis is needed")
    return [np.array([c]) if n == 1 else np.linspace(lo, hi, n)
            for (n, lo, hi, c) in zip(n_per_axis, region.lower, region.upper, region.centre)]


def uniform_mesh(n_per_axis, region):
    """
    tensor mesh with n points per axis including the faces (the centre when n = 1)
    """
    grids = np.meshgrid(*_axes(n_per_axis, region), indexing='ij')
    points = np.stack([g.reshape(-1) for g in grids], axis=-1)
    return SampleSet(points, region, SampleGenerator.UNIFORM_MESH)


def probe_mesh(region, resolution=100, n_augment=None):
    """
    Probe points over the closed box for fill-distance estimates

    For dim <= 2 a tensor mesh with resolution+1 points per axis. In higher
    dimensions a coarser mesh of about resolution² points plus n_augment scrambled
    Halton points (seeded, deterministic).
    """
    dim = region.dim
    if dim <= 2:
        return uniform_mesh(resolution + 1, region).points
    per_axis = max(2, int(round((resolution ** 2) ** (1.0 / dim))) + 1)
    grid = uniform_mesh(per_axis, region).points
    n_augment = resolution ** 2 if n_augment is None else n_augment
    extra = region.scale(qmc.Halton(d=dim, scramble=True, seed=0).random(n_augment)) if n_augment else \
        np.zeros((0, dim))
    return np.vstack([grid, extra])


def fill_distance(samples, probe=None, resolution=100):
    """
    h = sup over Ω̄ of the distance to the nearest sample, maximised over a probe mesh

    Parameters
    ----------
    samples : SampleSet
    probe : np.ndarray (P, dim), optional
        probe_mesh(samples.region, resolution) when omitted

    Raises
    ------
    ValueError
        for an empty sample set
    """
    if not len(samples):
        raise ValueError("fill distance of an empty sample set is undefined")
    probe = probe_mesh(samples.region, resolution) if probe is None else np.asarray(probe, dtype=float)
    distances, _ = cKDTree(samples.points).query(probe)
    return float(distances.max())


def uniform_fill_distance(n_per_axis, region):
    """
    closed-form fill distance of uniform_mesh(n_per_axis, region): half the cell
    diagonal, √d'/(2(n-1)) on the unit cube
    """
    n_per_axis = np.broadcast_to(np.asarray(n_per_axis, dtype=float), (region.dim,))
    cells = np.where(n_per_axis > 1, region.widths / np.maximum(n_per_axis - 1, 1), region.widths)
    return float(0.5 * np.linalg.norm(cells))
