from ..errors import DomainException, ShapeError  # noqa: F401


class InvalidK(DomainException):
    """Raised when the number of patches to mask is outside [1, N]."""

    pass


class InvalidOrder(DomainException):
    """Raised when a selection order repeats an index or leaves [0, N)."""

    pass


class NotADistribution(DomainException):
    """Raised when probabilities are negative or do not sum to one."""

    pass


class MaskPolicyError(DomainException):
    """Raised for an invalid masking policy configuration."""

    pass
