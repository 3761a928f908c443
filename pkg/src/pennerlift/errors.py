"""Exception types shared across the package.

Every error a caller is expected to branch on gets its own class; plain
``ValueError`` is reserved for programming mistakes (bad argument shapes,
out-of-range indices) that no caller should catch.
"""

from __future__ import annotations


class PennerliftError(Exception):
    """Base class for all package-specific failures."""


class ReducibleError(PennerliftError):
    """A matrix or chain required to be irreducible is not."""


class NonConvergenceError(PennerliftError):
    """Eigen iteration exhausted its budget or the tolerance is unreachable."""


class ValidationFailedError(PennerliftError):
    """A curve system / twist word failed validation.

    Carries the full report so callers can show every violation at once.
    """

    def __init__(self, report):
        self.report = report
        lines = "; ".join(issue.message for issue in report.issues)
        super().__init__(f"validation failed: {lines}")


class DecompositionError(PennerliftError):
    """Within/cross intersection data is inconsistent with the base matrix."""


class InconclusiveError(PennerliftError):
    """Finite-window checks did not stabilise; widen the window and retry."""


class SeriesCapError(PennerliftError):
    """A return-series request exceeded the exact-arithmetic term cap."""


class ParseError(PennerliftError):
    """A system file could not be parsed.  Carries line/column diagnostics."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(message)

    def __str__(self) -> str:  # pragma: no cover - trivial
        base = super().__str__()
        if self.line:
            return f"line {self.line}, column {self.column}: {base}"
        return base
