import numpy as np

from .functional import LagrangianKind


class ObservableReport(object):
    """
    Value of a linear observable together with its posterior variance
    only attributes with getters/setters can be assigned to this class
    """

    __value = None
    __variance = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, value, variance=None):
        super(ObservableReport, self).__init__()
        value = np.asarray(value, dtype=float)
        if variance is None:
            variance = np.zeros_like(value)
        variance = np.asarray(variance, dtype=float)
        if variance.shape != value.shape:
            raise ValueError("variance shape %s does not match value shape %s" % (variance.shape, value.shape))
        if np.any(variance < 0):
            raise ValueError("variance must be nonnegative")
        self.__value = value if value.ndim else float(value)
        self.__variance = variance if variance.ndim else float(variance)

    @property
    def value(self):
        return self.__value

    @property
    def variance(self):
        return self.__variance

    @property
    def std(self):
        return np.sqrt(self.__variance)

    def __repr__(self):
        return 'ObservableReport(value=%s, variance=%s)' % (self.__value, self.__variance)


class SymplecticMatrix(object):
    """
    Coordinate matrix W of the symplectic 2-form, ω(u, w) = uᵀ W w,
    in the frame (x, ẋ) or (x0, x1)
    """

    __entries = None
    __variance = None
    __kind = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, entries, kind=LagrangianKind.CONTINUOUS, variance=None):
        super(SymplecticMatrix, self).__init__()
        entries = np.array(entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] % 2:
            raise ValueError("symplectic matrix must be square of even size, got %s" % (entries.shape,))
        if variance is not None:
            variance = np.array(variance, dtype=float)
            if variance.shape != entries.shape:
                raise ValueError("entrywise variance must match the matrix shape")
        self.__entries = entries
        self.__variance = variance
        self.__kind = kind

    @property
    def entries(self):
        return self.__entries

    @property
    def variance(self):
        return self.__variance

    @property
    def kind(self):
        return self.__kind

    @property
    def d(self):
        return self.__entries.shape[0] // 2

    def antisymmetry_defect(self):
        """
        ‖W + Wᵀ‖ / max(1, ‖W‖)
        """
        norm = np.linalg.norm(self.__entries)
        return np.linalg.norm(self.__entries + self.__entries.T) / max(1.0, norm)

    def __repr__(self):
        return 'SymplecticMatrix(%s)' % np.array2string(self.__entries, precision=4)


class NewtonConfig(object):
    """
    Settings of the Newton solves for discrete evolution steps
    """

    def __init__(self, tol=1e-12, max_iter=50, fd_jacobian=False):
        self._tol = None
        self._max_iter = None
        self.tol = tol
        self.max_iter = max_iter
        self.fd_jacobian = bool(fd_jacobian)

    @property
    def tol(self):
        return self._tol

    @property
    def max_iter(self):
        return self._max_iter

    @tol.setter
    def tol(self, value):
        assert isinstance(value, (int, float)) and value > 0, \
            "tol must be a number > 0"
        self._tol = float(value)

    @max_iter.setter
    def max_iter(self, value):
        assert isinstance(value, int) and value > 0, \
            "max_iter must be an integer > 0"
        self._max_iter = value

    def __repr__(self):
        return 'NewtonConfig(tol=%g, max_iter=%d, fd_jacobian=%s)' % (self._tol, self._max_iter, self.fd_jacobian)


class Trajectory(object):
    """
    Motion sampled on increasing times

    states are phase points (x, ẋ) for continuous trajectories and snapshots x_k
    for discrete ones.
    """

    __times = None
    __states = None
    __kind = None

    def __setattr__(self, name, value):
        if hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise TypeError('Cannot set name %r on object of type %s' % (
                name, self.__class__.__name__))

    def __init__(self, times, states, kind=LagrangianKind.CONTINUOUS):
        super(Trajectory, self).__init__()
        times = np.array(times, dtype=float).reshape(-1)
        states = np.array(states, dtype=float)
        if states.ndim == 1:
            states = states[:, None]
        if states.shape[0] != times.size:
            raise ValueError("%d times for %d states" % (times.size, states.shape[0]))
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("trajectory times must be increasing")
        if kind is LagrangianKind.CONTINUOUS and states.shape[1] % 2:
            raise ValueError("continuous trajectory states must have 2d columns")
        self.__times = times
        self.__states = states
        self.__kind = kind

    @property
    def times(self):
        return self.__times

    @property
    def states(self):
        return self.__states

    @property
    def kind(self):
        return self.__kind

    @property
    def d(self):
        if self.__kind is LagrangianKind.CONTINUOUS:
            return self.__states.shape[1] // 2
        return self.__states.shape[1]

    @property
    def positions(self):
        return self.__states[:, :self.d]

    @property
    def velocities(self):
        if self.__kind is not LagrangianKind.CONTINUOUS:
            raise AttributeError("discrete trajectories carry no velocities")
        return self.__states[:, self.d:]

    def __len__(self):
        return self.__times.size

    def __repr__(self):
        return 'Trajectory(%s, %d states)' % (self.__kind.value, len(self))
