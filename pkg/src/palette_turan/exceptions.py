"""Exception types shared across the package."""


class PaletteError(ValueError):
    """Raised for malformed palettes or palette files."""


class GraphError(ValueError):
    """Raised for malformed 3-graphs or graph files."""


class MalformedCertificateError(ValueError):
    """An admission certificate does not cover every pair it must color."""


class NotMinimalError(ValueError):
    """A routine that needs a minimality-reduced palette got one with a removable color."""

    def __init__(self, color: int):
        super().__init__(f"palette is not minimality-reduced: color {color} is removable")
        self.color = color


class BudgetExceeded(RuntimeError):
    """An exact search refused to run because the input exceeds its size guard."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed. This always indicates a bug."""
