"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Vector/operator sizes are inconsistent."""


class DataError(ValueError):
    """Inputs contain non-finite or otherwise unusable entries."""


class ConfigError(Exception):
    """Configuration file missing, malformed, or outside the schema."""


class SolverError(RuntimeError):
    """A linear solve failed or did not reach the requested residual."""


class ExtrapolationError(SolverError):
    """Boundary-value ladder did not decrease geometrically.

    Carries the observed difference ladder for inspection.
    """

    def __init__(self, message, ladder=None):
        super().__init__(message)
        self.ladder = list(ladder) if ladder is not None else []
