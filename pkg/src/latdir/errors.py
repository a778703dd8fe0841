"""Exception types shared across the package."""


class LatdirError(Exception):
    """Base class for all package errors."""


class InvalidInputError(LatdirError, ValueError):
    """Arguments violate a documented precondition."""


class InvalidConstructionError(InvalidInputError):
    """A requested special vector cannot be built from the given data."""


class CapacityError(LatdirError, RuntimeError):
    """An enumeration would exceed the configured point cap."""


class InsufficientDataError(LatdirError, ValueError):
    """An estimator was given too few usable points."""


class UnsupportedError(LatdirError, ValueError):
    """Parameter outside the supported range."""
