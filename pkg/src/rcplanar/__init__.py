"""Random-cluster and isoperimetric computations on regular planar tessellations."""

from .errors import RCPlanarError

__version__ = "0.1.0"

__all__ = ["RCPlanarError", "__version__"]
