"""Exception types shared across the package."""


class ResourceError(RuntimeError):
    """A requested computation exceeds a configured size limit."""


class NumericalError(RuntimeError):
    """A numerical routine produced an inconsistent or unusable result."""


class StepSizeError(NumericalError):
    """Time integration drifted beyond its tolerance; reduce dt."""


class ConfigError(ValueError):
    """Invalid experiment configuration or input file."""
