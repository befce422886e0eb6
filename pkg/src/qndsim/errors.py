"""Exception hierarchy shared by every qndsim module."""


class QndSimError(Exception):
    """Base class for all qndsim errors."""


class ParameterError(QndSimError, ValueError):
    """Raised for out-of-range or inconsistent physical parameters."""


class RegisterError(QndSimError, ValueError):
    """Raised for unknown mode labels or mismatched mode registers."""


class ConfigError(QndSimError, ValueError):
    """Raised when a scheme configuration document cannot be parsed."""
