from ..errors import DomainException, ShapeError  # noqa: F401


class DegenerateCodebook(DomainException):
    """Raised when a codebook has fewer than two distinct vectors."""

    pass


class AugmentConfigError(DomainException):
    """Raised when augmentation bounds do not straddle 1 or sigma is negative."""

    pass
