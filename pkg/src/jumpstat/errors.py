"""Exception types raised by jumpstat."""


class JumpstatError(Exception):
    """Base class for all package errors."""


class ConfigurationError(JumpstatError, ValueError):
    """Inconsistent or incomplete physical / run configuration."""


class InvariantViolationError(JumpstatError):
    """A subspace that should be invariant under a generator is not."""


class AmbiguityError(JumpstatError):
    """A block generator has a degenerate null space."""


class ModelError(JumpstatError):
    """A computed quantity is unphysical (e.g. a clearly negative rate)."""


class UnsupportedConfigurationError(JumpstatError, ValueError):
    """The requested combination has no closed form."""


class DegenerateChainError(JumpstatError, ZeroDivisionError):
    """A telegraph rate formula has a vanishing denominator."""
