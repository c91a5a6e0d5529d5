"""Exception hierarchy shared by the library and the command line front end."""


class MuBasisError(Exception):
    """Base class for all library errors."""


class InputError(MuBasisError):
    """Invalid user input (bad syntax, bad parametrization)."""


class ParseError(InputError):
    """Syntax error in the expression grammar, with a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ValidationError(InputError):
    """A parametrization that violates its defining conditions."""


class CompletionError(MuBasisError):
    """Unimodular completion failed to produce a verified certificate."""


class VerificationError(MuBasisError):
    """A candidate basis failed one of the verification stages."""


class InternalError(MuBasisError):
    """An internal consistency check failed; indicates a library bug."""


class ResourceLimitError(MuBasisError):
    """A configured resource limit (degree, time) was exceeded."""
