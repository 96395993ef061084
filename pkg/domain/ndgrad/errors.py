from ..errors import DomainException, ShapeError  # noqa: F401


class NonScalarRoot(DomainException):
    """Raised when backward is started from a tensor with more than one element."""

    pass


class CheckpointFormatError(DomainException):
    """Raised when a checkpoint file cannot be parsed."""

    pass
