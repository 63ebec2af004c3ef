"""Exception types shared across the package."""


class SpinScrambleError(Exception):
    """Base class for all package-specific errors."""


class NotHermitian(SpinScrambleError):
    """A matrix required to be Hermitian fails the Hermiticity tolerance.

    Signals a model-construction bug, not a numerical edge case.
    """


class SiteOutOfRange(SpinScrambleError):
    """An operator term addresses a lattice site the model does not have."""


class DimensionMismatch(SpinScrambleError):
    """Operands live in Hilbert spaces of different dimensions."""


class InvariantViolation(SpinScrambleError):
    """A scientific invariant (dual-path agreement, bound sandwich, ...)
    failed at runtime. Maps to CLI exit code 2."""


class ConfigError(SpinScrambleError):
    """Invalid run configuration. Maps to CLI exit code 1."""
