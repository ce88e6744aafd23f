"""Exception hierarchy.

Every error raised by the package derives from :class:`MaglevError`, so
callers such as the CLI can map failures to exit codes by class.
"""


class MaglevError(Exception):
    """Base class for all package errors."""


class DomainError(MaglevError, ValueError):
    """An argument lies outside the domain where a model is defined."""


class UnknownGradeError(MaglevError, KeyError):
    """A magnet grade label is not in the remanence table."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown grade"


class NoLevitationError(DomainError):
    """No levitation solution exists for the given inputs."""


class SpectrumError(MaglevError, ValueError):
    """Malformed or unusable spectrum / trace data."""


class FitError(MaglevError, RuntimeError):
    """A least-squares fit failed or produced a non-physical result."""


class ConfigError(MaglevError, ValueError):
    """A configuration file is malformed or inconsistent."""
