"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A scenario configuration failed validation.

    The message names the offending field and the violated constraint.
    """


class DegenerateDensityError(ValueError):
    """The event density integrates to (numerically) zero over the domain."""


class SingularConfigurationError(ValueError):
    """Two sensors coincide, so a distance-based derivative is undefined."""
