"""Exception hierarchy.

User-facing errors derive from :class:`KhcError`; an
:class:`InvariantViolation` means a formula produced data that breaks one of
the core identities and is treated as a bug, not as bad input.
"""


class KhcError(Exception):
    """Base class for every error raised on inconsistent or invalid input."""


class InvalidData(KhcError):
    """Malformed system data (bad angles, wrong totals, unknown points...)."""


class NegativeMultiplicity(KhcError):
    pass


class NegativeHodgeNumber(KhcError):
    pass


class NegativeDimension(KhcError):
    pass


class NotScalarAtInfinity(KhcError):
    pass


class ChiMismatch(KhcError):
    pass


class ChiIsOne(KhcError):
    pass


class NotRigid(KhcError):
    pass


class NotAllowed(KhcError):
    pass


class IterationCapExceeded(KhcError):
    pass


class NotMultiplicityFree(KhcError):
    pass


class ShapeMismatch(KhcError):
    pass


class MissingTrivialBlock(KhcError):
    pass


class Inconsistent(KhcError):
    pass


class InvariantViolation(Exception):
    """An operation produced output violating a core identity (internal bug)."""
