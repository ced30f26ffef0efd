import numpy as np


def _as_vector(value, name):
    arr = np.array(value, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError("%s must contain only finite entries" % name)
    arr.flags.writeable = False
    return arr


class MultiIndex(object):
    """
    Derivative multi-index over the 2d phase-space coordinates
    only attributes with getters/setters can be assigned to this class
    """

    MAX_ORDER = 2

    __orders = None

    def __setattr__(self, name, value):
        """
        Prevent attribute assignment other than those defined below

        Parameters
        ----------
        name : str
        value : value

        Returns
        -------

        """
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, orders):
        """
        Parameters
        ----------
        orders : sequence of int
            nonnegative derivative order per coordinate, total order <= 2
        """
        super(MultiIndex, self).__init__()
        arr = np.array(orders, dtype=int).reshape(-1)
        if np.any(arr < 0):
            raise ValueError("multi-index orders must be nonnegative")
        if arr.sum() > self.MAX_ORDER:
            raise ValueError("multi-index total order %d exceeds %d" % (arr.sum(), self.MAX_ORDER))
        arr.flags.writeable = False
        self.__orders = arr

    @classmethod
    def zero(cls, dim):
        return cls(np.zeros(dim, dtype=int))

    @classmethod
    def unit(cls, dim, i, j=None):
        """
        multi-index e_i, or e_i + e_j when `j` is given
        """
        orders = np.zeros(dim, dtype=int)
        orders[i] += 1
        if j is not None:
            orders[j] += 1
        return cls(orders)

    @property
    def orders(self):
        return self.__orders

    @property
    def order(self):
        return int(self.__orders.sum())

    @property
    def dim(self):
        return self.__orders.size

    def __eq__(self, other):
        return isinstance(other, MultiIndex) and np.array_equal(self.__orders, other.orders)

    def __hash__(self):
        return hash(tuple(self.__orders))

    def __repr__(self):
        return 'MultiIndex(%s)' % list(self.__orders)


class PhasePoint(object):
    """
    Point x̄ = (x, ẋ) of a continuous phase space or (x0, x1) of a discrete one
    only attributes with getters/setters can be assigned to this class
    """

    __coords = None
    __d = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, coords, d=None):
        """
        Parameters
        ----------
        coords : array-like
            vector of length 2d
        d : int, optional
            configuration-space dimension, inferred from len(coords) when omitted
        """
        super(PhasePoint, self).__init__()
        coords = _as_vector(coords, 'coords')
        if d is None:
            if coords.size % 2:
                raise ValueError("phase point needs an even number of coordinates, got %d" % coords.size)
            d = coords.size // 2
        if not isinstance(d, (int, np.integer)) or d <= 0:
            raise ValueError("d must be a positive integer")
        if coords.size != 2 * d:
            raise ValueError("coords length %d does not equal 2d = %d" % (coords.size, 2 * d))
        self.__coords = coords
        self.__d = int(d)

    @classmethod
    def from_pair(cls, first, second):
        """
        build (x, ẋ) or (x0, x1) from its two halves
        """
        first = np.atleast_1d(np.asarray(first, dtype=float))
        second = np.atleast_1d(np.asarray(second, dtype=float))
        if first.shape != second.shape:
            raise ValueError("both halves of a phase point must have the same length")
        return cls(np.concatenate([first, second]))

    @property
    def coords(self):
        return self.__coords

    @property
    def d(self):
        return self.__d

    @property
    def dim(self):
        return 2 * self.__d

    @property
    def first(self):
        """x for continuous points, x0 for discrete ones"""
        return self.__coords[:self.__d]

    @property
    def second(self):
        """ẋ for continuous points, x1 for discrete ones"""
        return self.__coords[self.__d:]

    # continuous aliases
    x = first
    v = second

    def __eq__(self, other):
        return isinstance(other, PhasePoint) and np.array_equal(self.__coords, other.coords)

    def __hash__(self):
        return hash(self.__coords.tobytes())

    def __repr__(self):
        return 'PhasePoint(%s)' % np.array2string(self.__coords, precision=6)


class JetPoint(object):
    """
    Second-order jet x̂ = (x, ẋ, ẍ) of a continuous motion
    """

    __base = None
    __accel = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, base, accel):
        """
        Parameters
        ----------
        base : PhasePoint or array-like
            the point (x, ẋ)
        accel : array-like
            acceleration ẍ, length d
        """
        super(JetPoint, self).__init__()
        if not isinstance(base, PhasePoint):
            base = PhasePoint(base)
        accel = _as_vector(accel, 'accel')
        if accel.size != base.d:
            raise ValueError("acceleration length %d does not match d = %d" % (accel.size, base.d))
        self.__base = base
        self.__accel = accel

    @property
    def base(self):
        return self.__base

    @property
    def accel(self):
        return self.__accel

    @property
    def d(self):
        return self.__base.d

    @property
    def x(self):
        return self.__base.x

    @property
    def v(self):
        return self.__base.v

    def __repr__(self):
        return 'JetPoint(x=%s, v=%s, a=%s)' % (self.x, self.v, self.__accel)


class SnapshotTriple(object):
    """
    Three consecutive snapshots (x0, x1, x2) of a motion sampled at a fixed time step
    """

    __x0 = None
    __x1 = None
    __x2 = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, x0, x1, x2):
        super(SnapshotTriple, self).__init__()
        x0 = _as_vector(x0, 'x0')
        x1 = _as_vector(x1, 'x1')
        x2 = _as_vector(x2, 'x2')
        if not x0.size == x1.size == x2.size:
            raise ValueError("snapshots of a triple must share one dimension")
        self.__x0 = x0
        self.__x1 = x1
        self.__x2 = x2

    @property
    def x0(self):
        return self.__x0

    @property
    def x1(self):
        return self.__x1

    @property
    def x2(self):
        return self.__x2

    @property
    def d(self):
        return self.__x0.size

    @property
    def first_pair(self):
        """(x0, x1) as a point of the discrete phase space"""
        return PhasePoint.from_pair(self.__x0, self.__x1)

    @property
    def second_pair(self):
        """(x1, x2) as a point of the discrete phase space"""
        return PhasePoint.from_pair(self.__x1, self.__x2)

    def __repr__(self):
        return 'SnapshotTriple(%s, %s, %s)' % (self.__x0, self.__x1, self.__x2)
