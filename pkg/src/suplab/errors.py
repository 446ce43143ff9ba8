"""Exception types shared across the package."""


class SuplabError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(SuplabError):
    """A tuning or algorithm parameter violates its contract."""


class InvalidInputError(SuplabError):
    """Input data violates a precondition (empty series, bad range, ...)."""


class SuproParseError(SuplabError):
    """SUPRO document is not well-formed JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class SuproValidationError(SuplabError):
    """SUPRO document is well-formed but violates the schema."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class GenerationError(SuplabError):
    """Synthetic data generation could not satisfy its constraints."""


class NoCyclesError(SuplabError):
    """A usage profile yielded too few edges to form any cycle."""


class DegenerateInputError(SuplabError):
    """Clustering input cannot support the requested number of clusters."""


class InvalidStateError(SuplabError):
    """An operation was invoked on an unusable state (e.g. empty training set)."""


class PipelineError(SuplabError):
    """A classification pipeline stage failed; carries the stage name."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
