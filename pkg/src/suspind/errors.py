"""Exception types shared across the toolkit."""


class SuspindError(Exception):
    """Base class for all toolkit errors."""


class SpecError(SuspindError):
    """A device description violates one or more invariants.

    Carries the full violation list so callers can report every problem
    at once instead of fixing them one by one.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class FormulaDomainError(SuspindError):
    """Inputs fall outside the validity domain of a closed-form expression."""


class SingularityError(SuspindError):
    """A computation hit a genuine singularity (coincident filaments,
    lossless network, empty curve, ...)."""


class ConversionError(SuspindError):
    """Network-parameter conversion failed (singular matrix at some
    frequency)."""


class GridAlignmentError(SuspindError):
    """Two networks do not share an identical frequency grid.

    No implicit resampling is ever performed; mismatched grids are a hard
    error because silent interpolation corrupts de-embedding.
    """


class TouchstoneError(SuspindError):
    """Malformed Touchstone input. ``line`` is the 1-based source line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StabilityError(SuspindError):
    """The structural model is insufficiently constrained (rigid-body
    modes present or a singular stiffness matrix)."""


class ConfigError(SuspindError):
    """A configuration / spec / grid file could not be interpreted."""
