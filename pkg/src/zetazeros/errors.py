"""Exception types shared by every evaluator and the zero engine."""


class ZetaError(Exception):
    """Base class for all package-specific failures."""


class PoleProximity(ZetaError):
    """Requested point is within pole_guard of a known pole candidate.

    ``source`` names the offending atom or factor when known.
    """

    def __init__(self, message, location=None, source=None):
        super().__init__(message)
        self.location = location
        self.source = source


class BudgetExceeded(ZetaError):
    """Error target unreachable under the configured term budget."""


class NotInConvergenceRegion(ZetaError):
    """Direct-summation oracle called outside its absolute-convergence margin."""


class OutOfRange(ZetaError):
    """Structural parameter (r, n, ...) outside the supported table range."""


class NearZeroOnContour(ZetaError):
    """|F| dropped below the near-zero threshold at a boundary sample.

    Callers retry with a deterministic outward jitter.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class DepthExceeded(ZetaError):
    """Adaptive refinement hit its depth or evaluation cap."""


class ContourError(ZetaError):
    """Phase accumulator failed to close on an integer multiple of 2*pi."""


class ExprSyntaxError(ZetaError):
    """Expression text violates the grammar; ``position`` is the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownFamily(ZetaError):
    """Unrecognized function name in an expression."""


class ArityError(ZetaError):
    """Known function called with the wrong number or kind of arguments."""
