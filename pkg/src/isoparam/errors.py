"""Exception types shared across the package."""


class IsoparamError(Exception):
    """Base class for all package errors."""


class InvalidArgument(IsoparamError, ValueError):
    pass


class InvalidFamily(IsoparamError, ValueError):
    """Parameters do not describe an OT-FKM family (e.g. m2 <= 0)."""


class InvalidVariant(IsoparamError, ValueError):
    pass


class DimensionMismatch(IsoparamError, ValueError):
    pass


class InternalInconsistency(IsoparamError, RuntimeError):
    """An exact invariant that must hold by construction did not."""


class SamplingFailure(IsoparamError, RuntimeError):
    pass


class MembershipError(IsoparamError, ValueError):
    """A point is not on the requested focal submanifold."""


class NotApplicable(IsoparamError, ValueError):
    pass


class DegeneratePair(IsoparamError, ValueError):
    """Two tangent vectors do not span a 2-plane."""


class ReportError(IsoparamError, OSError):
    """A report could not be written."""
