name = "compute"

from . import (kernels, functionals, inference, observables, dynamics, exceptions)

__all__ = ["kernels", "functionals", "inference", "observables", "dynamics", "exceptions"]
