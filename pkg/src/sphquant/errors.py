"""Exception hierarchy for sphquant."""


class SphQuantError(ValueError):
    """Base class for all validation and numerical errors raised here."""


class InvalidCoordinateError(SphQuantError):
    pass


class RadiusMismatchError(SphQuantError):
    pass


class AntipodalError(SphQuantError):
    """Raised where a log map or a unique geodesic is undefined."""


class NonTangentError(SphQuantError):
    pass


class DegenerateMeanError(SphQuantError):
    """The Euclidean mean of the points vanishes, so it cannot be projected."""


class InsufficientDataError(SphQuantError):
    pass


class InstanceTooLargeError(SphQuantError):
    pass


class UnorderedInputError(SphQuantError):
    pass


class EmptyCodebookError(SphQuantError):
    pass


class ConvergenceError(SphQuantError):
    pass
