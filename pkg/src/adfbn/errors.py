"""Exception types shared across the package."""


class AdfBnError(Exception):
    """Base class for analysis errors (CLI exit code 1)."""


class ModelMismatchError(AdfBnError, KeyError):
    """An atom referenced by a formula or interpretation is not in the model."""

    def __str__(self) -> str:
        return Exception.__str__(self)


class BudgetExceeded(AdfBnError):
    """An exhaustive scan would exceed the configured enumeration budget."""


class PreconditionError(AdfBnError, ValueError):
    """An operation was called on input outside its documented domain."""


class ParseError(AdfBnError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
