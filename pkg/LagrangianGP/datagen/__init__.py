name = "datagen"

from . import (reference_systems, sampling, observations)

__all__ = ["reference_systems", "sampling", "observations"]
