"""Exception hierarchy shared across the solver."""


class RbvpError(Exception):
    """Base class for solver errors."""


class ContourError(RbvpError, ValueError):
    """Invalid or degenerate contour."""


class WindingError(RbvpError):
    """Winding number cannot be resolved at the current node count."""


class NearBoundaryError(RbvpError):
    """Evaluation requested inside the refusal band around the contour."""


class BranchClosureError(RbvpError):
    """Unwrapped logarithm does not close after one loop."""


class ReductionError(RbvpError):
    """Problem data outside the regimes covered by the reduction."""


class TransportError(RbvpError):
    """Supplied conformal maps fail their consistency checks."""
