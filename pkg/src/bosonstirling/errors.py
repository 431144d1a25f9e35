"""Exceptions shared across the package."""


class ParseError(ValueError):
    """Malformed word text.

    `offset` is the character position of the offending token in the input.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class RangeError(IndexError):
    """Requested data lies outside what has been materialized or stored."""
