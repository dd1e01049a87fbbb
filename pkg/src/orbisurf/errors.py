"""Exception hierarchy shared by every module."""


class OrbisurfError(Exception):
    """Base class for all errors raised by the package."""


class DimensionMismatch(OrbisurfError, ValueError):
    pass


class SingularMatrix(OrbisurfError, ValueError):
    pass


class NotSymmetric(OrbisurfError, ValueError):
    pass


class NotNegativeDefinite(OrbisurfError, ValueError):
    pass


class NotSmoothModel(OrbisurfError, ValueError):
    pass


class BadCenter(OrbisurfError, ValueError):
    pass


class UnknownCurve(OrbisurfError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InconsistentInput(OrbisurfError, ValueError):
    """The configuration cannot satisfy the hypotheses it was checked against."""


class NotOrbifold(OrbisurfError, ValueError):
    """A boundary coefficient is not of the form 1 - 1/m for an integer m."""


class DepthTooLarge(OrbisurfError, ValueError):
    pass


class BadRamification(OrbisurfError, ValueError):
    pass


class ContractionFailed(OrbisurfError, RuntimeError):
    pass


class ParseError(OrbisurfError, ValueError):
    """Malformed input; the message carries the position of the offending value."""


class ValidationError(OrbisurfError, ValueError):
    """Well-formed input that violates a named invariant."""
