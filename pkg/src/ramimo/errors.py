"""Exception types shared across the package."""


class RamimoError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RamimoError, ValueError):
    """An argument or derived quantity violates its documented contract."""


class ModelValidityError(ValidationError):
    """Inputs fall outside the regime where the underlying model holds."""


class CoverageError(ValidationError):
    """A requested beam direction lies outside the antenna's angular span."""


class FeedConflictError(ValidationError):
    """Two requested beam directions resolve to the same feed."""


class SearchSpaceError(ValidationError):
    """An exhaustive search would exceed the enumeration guard."""


class ConfigError(RamimoError, ValueError):
    """An experiment config failed to parse or validate."""
