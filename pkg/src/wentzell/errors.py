"""Semantic exception hierarchy shared by all layers of the package."""


class WentzellError(Exception):
    """Base class for every error raised by this package."""


class InvalidPointError(WentzellError, ValueError):
    """Kernel evaluation requested outside its domain (t <= 0, x < 0 or y < 0)."""


class OutOfDomainError(WentzellError, ValueError):
    """Initial datum evaluated at a point outside [0, inf)."""


class NotSmoothError(WentzellError, ValueError):
    """Derivative requested from a datum that does not provide one."""


class NoConvergenceError(WentzellError, RuntimeError):
    """Adaptive quadrature exhausted its subdivision budget above tolerance."""


class StabilityError(WentzellError, ValueError):
    """Explicit-regime time step violates the stability bound."""


class SingularSystemError(WentzellError, RuntimeError):
    """The implicit boundary-value system could not be solved."""
