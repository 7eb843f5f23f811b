"""ErGaps Error Classes."""


class ErGapsError(Exception):
    """A Dummy "root" Exception for all ErGaps-specific errors to inherit from."""


class ParameterError(ValueError, ErGapsError):
    """An error caused by an argument outside of the domain an operation accepts."""


class RangeError(ParameterError):
    """An error caused by a query outside of the range that a table covers."""

    def __init__(self, value: int, limit: int, what: str = "x") -> None:
        super().__init__(value, limit, what)
        self.value = value
        self.limit = limit
        self.what = what

    def __str__(self):
        return f"{self.what}={self.value} is beyond the table limit {self.limit}"


class ResourceError(RuntimeError, ErGapsError):
    """An error caused when a computation would exceed a configured budget."""

    def __init__(self, message: str, required: int | None = None) -> None:
        super().__init__(message, required)
        self.message = message
        self.required = required

    def __str__(self):
        if self.required is None:
            return self.message
        return f"{self.message} (required: {self.required})"


class NumericalError(ArithmeticError, ErGapsError):
    """An error caused by a numerical routine failing to reach its tolerance."""
