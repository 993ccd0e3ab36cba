"""Exception hierarchy shared across the package."""


class CramerCltError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CramerCltError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation was requested exactly at a pole."""


class WrongSeriesError(DomainError):
    """A principal character was passed to a non-principal-only series."""


class InsufficientDataError(DomainError):
    """Too few samples for the requested statistic."""


class InsufficientStateError(CramerCltError):
    """A state holds fewer pseudo-primes than requested.

    Callers should resample with a larger cutoff.
    """


class ConfigError(CramerCltError):
    """Invalid run configuration (CLI flags, config file, character spec)."""
