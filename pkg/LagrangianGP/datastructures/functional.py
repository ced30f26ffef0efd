from enum import Enum

import numpy as np

from .phase_point import PhasePoint, MultiIndex


class LagrangianKind(Enum):
    CONTINUOUS = 'continuous'
    DISCRETE = 'discrete'


class MomentumVariant(Enum):
    CONTINUOUS = 'continuous'
    DISCRETE_MINUS = 'discrete_minus'
    DISCRETE_PLUS = 'discrete_plus'

    @property
    def kind(self):
        if self is MomentumVariant.CONTINUOUS:
            return LagrangianKind.CONTINUOUS
        return LagrangianKind.DISCRETE


class Functional(object):
    """
    Bounded linear functional φ(L) = Σ weight·(∂^index L)(point)

    Terms are stored column-wise (weights, points, orders) so that pairings
    against the kernel can be evaluated for all terms at once.
    only attributes with getters/setters can be assigned to this class
    """

    __weights = None
    __points = None
    __orders = None
    __label = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, weights, points, orders, label=''):
        """
        Parameters
        ----------
        weights : array-like, shape (T,)
        points : array-like, shape (T, 2d)
            anchor point of every term
        orders : array-like of int, shape (T, 2d)
            multi-index of every term, total order <= 2
        label : str
            human readable tag, e.g. 'EL[3,1]'
        """
        super(Functional, self).__init__()
        weights = np.array(weights, dtype=float).reshape(-1)
        points = np.array(points, dtype=float)
        orders = np.array(orders, dtype=int)
        if points.ndim != 2 or orders.shape != points.shape or weights.size != points.shape[0]:
            raise ValueError("inconsistent term arrays: weights %s, points %s, orders %s"
                             % (weights.shape, points.shape, orders.shape))
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(points))):
            raise ValueError("functional terms must be finite")
        if orders.size and (orders.min() < 0 or orders.sum(axis=1).max() > MultiIndex.MAX_ORDER):
            raise ValueError("functional term orders must be nonnegative with total order <= %d"
                             % MultiIndex.MAX_ORDER)
        for arr in (weights, points, orders):
            arr.flags.writeable = False
        self.__weights = weights
        self.__points = points
        self.__orders = orders
        self.__label = str(label)

    @classmethod
    def from_terms(cls, terms, label=''):
        """
        build from an iterable of (weight, PhasePoint, MultiIndex)
        """
        terms = list(terms)
        if not terms:
            raise ValueError("a functional needs at least one term")
        weights = [float(w) for (w, _, _) in terms]
        points = [p.coords for (_, p, _) in terms]
        orders = [idx.orders for (_, _, idx) in terms]
        return cls(weights, points, orders, label=label)

    @property
    def weights(self):
        return self.__weights

    @property
    def points(self):
        return self.__points

    @property
    def orders(self):
        return self.__orders

    @property
    def label(self):
        return self.__label

    @property
    def dim(self):
        return self.__points.shape[1]

    @property
    def n_terms(self):
        return self.__weights.size

    @property
    def terms(self):
        """list of (weight, PhasePoint, MultiIndex)"""
        return [(w, PhasePoint(p), MultiIndex(o))
                for (w, p, o) in zip(self.__weights, self.__points, self.__orders)]

    def __add__(self, other):
        if not isinstance(other, Functional):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("cannot add functionals of dimension %d and %d" % (self.dim, other.dim))
        return Functional(np.concatenate([self.__weights, other.weights]),
                          np.vstack([self.__points, other.points]),
                          np.vstack([self.__orders, other.orders]),
                          label=self.__label)

    def __mul__(self, scalar):
        return Functional(float(scalar) * self.__weights, self.__points, self.__orders, label=self.__label)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __len__(self):
        return self.n_terms

    def __repr__(self):
        return 'Functional(%s, %d terms)' % (self.__label, self.n_terms)
