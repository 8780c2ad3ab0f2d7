"""Exception hierarchy shared by all rcplanar modules."""


class RCPlanarError(Exception):
    """Base class for every error raised by this package."""


class SpecError(RCPlanarError, ValueError):
    """Invalid (d, codegree) pair."""


class SphericalSpec(SpecError):
    """(d - 2)(codegree - 2) < 4: the tessellation is finite (spherical)."""


class DegenerateSpec(SpecError):
    """d < 3 or codegree < 3."""


class GeometryError(RCPlanarError):
    """Construction produced an inconsistent planar map."""


class NoFaces(RCPlanarError):
    """Graph has no complete face, so the dual is empty."""


class TruncatedBall(RCPlanarError):
    """The requested ball reaches the frontier of the built patch."""


class FrontierVertex(RCPlanarError):
    """A vertex set touches the frontier, so its degrees are not full."""


class FrontierContact(RCPlanarError):
    """A face/vertex closure escapes the built patch."""


class EmptyPatch(RCPlanarError, ValueError):
    pass


class NoInternalEdges(RCPlanarError, ValueError):
    pass


class BudgetExceeded(RCPlanarError):
    """An exhaustive enumeration would exceed its configured cap."""


class DomainError(RCPlanarError, ValueError):
    pass


class Inapplicable(RCPlanarError):
    """A threshold formula's hypothesis cannot hold for the given input."""


class NoCoalescence(RCPlanarError):
    """Coupling from the past did not coalesce within the doubling cap."""


class BadSpin(RCPlanarError, ValueError):
    pass


class DominationViolated(RCPlanarError, AssertionError):
    """A stochastic-domination check failed."""
