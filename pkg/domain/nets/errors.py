from ..errors import DomainException, ShapeError  # noqa: F401


class TokenRange(DomainException):
    """Raised when a token id falls outside [0, K)."""

    pass


class NetConfigError(DomainException):
    """Raised when network dimensions are inconsistent."""

    pass
