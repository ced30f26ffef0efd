import numpy as np

from .functional import LagrangianKind


class AnalyticLagrangian(object):
    """
    Lagrangian with closed-form value, gradient and Hessian

    The evaluators act on the last axis of their argument, so a single point of
    shape (2d,) or a batch of shape (N, 2d) can be passed. For discrete Lagrangians
    the coordinates are (x0, x1).

    Parameters
    ----------
    value : callable
        x̄ -> L(x̄), shape (...,)
    gradient : callable
        x̄ -> ∂L(x̄), shape (..., 2d)
    hessian : callable
        x̄ -> ∂²L(x̄), shape (..., 2d, 2d)
    d : int
        configuration-space dimension
    name : str
    params : dict
        parameters of the system, e.g. {'alpha': 0.1}
    kind : LagrangianKind
    """

    def __init__(self, value, gradient, hessian, d, name='', params=None, kind=LagrangianKind.CONTINUOUS):
        if not all(callable(f) for f in (value, gradient, hessian)):
            raise TypeError("value, gradient and hessian must be callables")
        if not isinstance(kind, LagrangianKind):
            raise TypeError("kind must be a LagrangianKind")
        self._value = value
        self._gradient = gradient
        self._hessian = hessian
        self._d = int(d)
        self.name = name
        self.params = dict(params or {})
        self._kind = kind

    @property
    def d(self):
        return self._d

    @property
    def dim(self):
        return 2 * self._d

    @property
    def kind(self):
        return self._kind

    def _check(self, coords):
        coords = np.asarray(getattr(coords, 'coords', coords), dtype=float)
        if coords.shape[-1] != self.dim:
            raise ValueError("expected points with %d coordinates, got %d" % (self.dim, coords.shape[-1]))
        return coords

    def value(self, coords):
        return self._value(self._check(coords))

    def gradient(self, coords):
        return self._gradient(self._check(coords))

    def hessian(self, coords):
        return self._hessian(self._check(coords))

    def jet(self, coords):
        coords = self._check(coords)
        return self._value(coords), self._gradient(coords), self._hessian(coords)

    def partial(self, index, coords):
        """
        ∂^index L at `coords` for a multi-index of total order <= 2
        """
        orders = np.asarray(getattr(index, 'orders', index), dtype=int)
        nz = np.flatnonzero(orders)
        total = int(orders.sum())
        if total == 0:
            return self.value(coords)
        if total == 1:
            return self.gradient(coords)[..., nz[0]]
        if total == 2:
            i, j = (nz[0], nz[0]) if nz.size == 1 else (nz[0], nz[1])
            return self.hessian(coords)[..., i, j]
        raise ValueError("analytic partials are available up to order 2, got %d" % total)

    def __repr__(self):
        return 'AnalyticLagrangian(%s, d=%d, %s)' % (self.name, self._d, self._kind.value)
