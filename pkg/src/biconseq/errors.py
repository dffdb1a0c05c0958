"""Exception hierarchy. CLI exit codes are keyed off these classes."""


class BiconseqError(Exception):
    exit_code = 2


class ParseError(BiconseqError, ValueError):
    """Malformed input text. ``position`` is a 0-based column when known."""

    exit_code = 1

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class PreconditionError(BiconseqError):
    exit_code = 2


class CapExceeded(PreconditionError):
    pass


class InvariantError(BiconseqError):
    """An internal cross-check disagreed; always a bug."""

    exit_code = 3
