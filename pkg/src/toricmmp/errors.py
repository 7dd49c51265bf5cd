"""Exception hierarchy shared by all modules."""


class ToricError(Exception):
    """Base class for every error raised by toricmmp."""


class DimensionMismatch(ToricError, ValueError):
    pass


class LinearAlgebraError(ToricError, ValueError):
    """Dependent generators, a point outside a span, a zero vector..."""


class UnboundedPolytopeError(ToricError):
    pass


class FanValidationError(ToricError):
    """A collection of cones violates the fan axioms."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotQCartierError(ToricError):
    def __init__(self, message, cone=None):
        super().__init__(message)
        self.cone = cone


class NotRefinementError(ToricError):
    pass


class EmptyAdjointPolytope(ToricError):
    """Box of the adjoint support function is empty (kappa = -inf)."""


class ChamberSearchError(ToricError):
    pass


class ClaimFailure(ToricError):
    """A mandatory verification of a constructed model failed.

    ``claim`` carries a short machine name such as ``"k_sigma_in_box"``.
    """

    def __init__(self, claim, detail=""):
        super().__init__(f"claim: {claim}" + (f" ({detail})" if detail else ""))
        self.claim = claim
        self.detail = detail


class MaxStepsExceeded(ToricError):
    pass


class DocumentError(ToricError):
    """Schema violation in an input document; ``where`` names the field."""

    def __init__(self, message, where=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
