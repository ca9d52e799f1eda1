"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed input file. Carries the offending 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InternalConsistencyError(RuntimeError):
    """A mathematical invariant that should hold by construction was violated.

    Raised e.g. when a Cholesky pivot collapses or the homotopy direction
    degenerates; indicates a bug or numerically hostile input, not a user error.
    """
