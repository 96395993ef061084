from ..errors import DomainException, ShapeError  # noqa: F401


class InvalidCutoff(DomainException):
    """Raised when filter cutoffs fall outside (0, Nyquist)."""

    pass


class MissingSamples(DomainException):
    """Raised when an operation needing gap-free input receives missing samples."""

    pass


class EmptyRecord(DomainException):
    """Raised when a record has no samples or resamples to none."""

    pass


class InvalidRecord(DomainException):
    """Raised when a record's sample rate is not positive."""

    pass


class PatchMismatch(DomainException):
    """Raised when a segment length is not a multiple of the patch length."""

    pass


class InvalidSchedule(DomainException):
    """Raised when a synthesis config has bad rates or artifact spans."""

    pass


class ContainerFormatError(DomainException):
    """Raised when a PPGB file is malformed."""

    pass
