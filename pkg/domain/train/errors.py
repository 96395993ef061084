from ..errors import DomainException, ShapeError  # noqa: F401


class EmptyDataset(DomainException):
    """Raised when training is asked to run on zero segments."""

    pass


class FrozenViolation(DomainException):
    """Raised when the tokenizer given to pretraining still has trainable parameters."""

    pass


class TrainConfigError(DomainException):
    """Raised for invalid stage settings."""

    pass


class NonFiniteMetric(DomainException):
    """Raised when an epoch produces a NaN or infinite loss."""

    pass
