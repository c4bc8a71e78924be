"""Exception types shared across the package."""


class LtlsnError(Exception):
    """Base class for all library errors."""


class FormulaSyntaxError(LtlsnError):
    """A formula string could not be parsed.

    ``position`` is the 1-based column of the offending character.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (column {position})")
        self.position = position


class ModelSyntaxError(LtlsnError):
    """A model file is malformed: bad line shape, unknown keyword,
    missing or duplicated section."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ModelConstraintError(LtlsnError):
    """A model parses but violates a structural constraint: threshold out
    of range, self-loop, undeclared agent, isolated agent, or fewer than
    two agents."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownAgentError(LtlsnError):
    """A formula mentions an agent the model does not declare."""


class TranslationError(LtlsnError):
    """A translation precondition failed (temporal operator where none is
    allowed) or an internal cost check was violated."""


class MajorityExpansionError(LtlsnError):
    """An explicit majority expansion would exceed its size guard."""
