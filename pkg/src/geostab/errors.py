"""Exception hierarchy.

Everything raised on purpose by this package derives from GeostabError, so
callers (and the CLI) can tell data problems from programming errors.
"""


class GeostabError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(GeostabError, ValueError):
    pass


class NonSymmetric(GeostabError, ValueError):
    pass


class NonIntegralGram(GeostabError, ValueError):
    pass


class WrongSignature(GeostabError, ValueError):
    def __init__(self, observed, message=None):
        self.observed = observed
        super().__init__(message or f"intersection form has signature {observed}, expected (1, rank-1)")


class EmptyAmpleCone(GeostabError, ValueError):
    pass


class InconsistentAmpleCone(GeostabError, ValueError):
    pass


class InvalidSurface(GeostabError, ValueError):
    """Raised by surface validation; carries every violation found."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(f"{type(v).__name__}: {v}" for v in self.violations)
        super().__init__(f"invalid surface ({len(self.violations)} violation(s)): {lines}")


class SurfaceFormatError(GeostabError, ValueError):
    """The surface file could not be parsed into SurfaceData."""


class NotAmple(GeostabError, ValueError):
    pass


class NonpositiveRank(GeostabError, ValueError):
    pass


class EmptyGrid(GeostabError, ValueError):
    pass


class NotPositiveDefinite(GeostabError, ValueError):
    pass


class BadParameter(GeostabError, ValueError):
    pass


class PreconditionViolated(GeostabError, ValueError):
    pass


class NotInside(GeostabError, ValueError):
    """A contraction was requested from a point not certified Inside."""
