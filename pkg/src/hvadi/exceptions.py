"""Exception types shared across the solver library."""


class HvadiError(Exception):
    """Base class for all library errors."""


class GridError(HvadiError, ValueError):
    """Invalid grid construction (inverted bounds, too few nodes, ...)."""


class SamplingError(HvadiError, ValueError):
    """A sampled function returned a non-finite value."""


class FieldMismatchError(HvadiError, ValueError):
    """Two fields (or a field and a grid) live on incompatible grids."""


class BoundaryClosureError(HvadiError, ValueError):
    """A wide stencil was evaluated near a Dirichlet boundary without ghosts."""


class SingularMatrixError(HvadiError, ArithmeticError):
    """Banded LU encountered a vanishing pivot."""

    def __init__(self, row: int, message: str | None = None):
        self.row = row
        super().__init__(message or f"vanishing pivot in row {row}")


class ShapeError(HvadiError, ValueError):
    """Right-hand-side or field dimensions do not match a factorization."""


class UnsupportedSchemeError(HvadiError, ValueError):
    """Scheme/boundary-condition combination outside the supported set."""


class InvalidCoefficientsError(HvadiError, ValueError):
    """Problem coefficients violate a scheme requirement."""


class ConfigError(HvadiError, ValueError):
    """Invalid run or study configuration."""


class DivergenceError(HvadiError, ArithmeticError):
    """An integration produced non-finite values."""
