"""Exception hierarchy shared by every module."""


class FairVDError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(FairVDError, ValueError):
    """Malformed graph, formula, vertex set or instance."""


class FormulaSyntaxError(InvalidInputError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnboundVariableError(InvalidInputError):
    def __init__(self, name):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


class InvalidStateError(FairVDError):
    """A precondition on intermediate data (kernel, shape, tree) was violated."""


class ResourceLimitError(FairVDError):
    """A configured enumeration cap, atom budget or time budget was exceeded."""
