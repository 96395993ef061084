class DomainException(Exception):
    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class ShapeError(DomainException):
    """Raised when array shapes or lengths are incompatible."""

    pass
