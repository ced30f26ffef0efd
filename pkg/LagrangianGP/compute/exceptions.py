"""
Numerical failures raised by the compute package
"""


class NumericalError(RuntimeError):
    pass


class DegenerateLagrangianError(NumericalError):
    """∂²L/∂ẋ∂ẋ (or ∂²L_d/∂x0∂x1) is numerically singular at the query point"""


class NewtonConvergenceError(NumericalError):
    pass


class InconsistentConstraintsError(NumericalError):
    """the right-hand side is not in the range of Θ within tolerance"""


class NonFiniteGramError(NumericalError):
    pass
