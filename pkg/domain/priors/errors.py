from ..errors import DomainException, ShapeError  # noqa: F401


class PriorConfigError(DomainException):
    """Raised when prior-score parameters are out of range."""

    pass
