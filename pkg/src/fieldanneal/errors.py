"""Exception hierarchy shared by every module."""


class FieldAnnealError(Exception):
    """Base class for library errors."""


class DimensionTooLarge(FieldAnnealError):
    pass


class DimensionMismatch(FieldAnnealError):
    pass


class InvalidSite(FieldAnnealError):
    pass


class IndexOutOfRange(FieldAnnealError):
    pass


class InvalidSpec(FieldAnnealError):
    pass


class NonConvergence(FieldAnnealError):
    pass


class NonUnitaryGate(FieldAnnealError):
    pass


class OutOfDomain(FieldAnnealError):
    pass


class StepFailure(FieldAnnealError):
    """Adaptive integrator could not meet its tolerance."""


class DiagonalizationFailure(FieldAnnealError):
    pass


class GridTooCoarse(FieldAnnealError):
    pass


class SchemaError(FieldAnnealError):
    pass


class ConfigError(FieldAnnealError):
    """Invalid or incomplete experiment configuration."""
