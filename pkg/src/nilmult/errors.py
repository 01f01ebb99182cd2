"""Exception hierarchy shared by the library and the CLI."""


class NilmultError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class DomainError(NilmultError, ValueError):
    """An argument lies outside the operation's domain."""


class PreconditionError(NilmultError):
    """Inputs violate a theorem hypothesis; ``violations`` lists why."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class SizeError(NilmultError):
    """A configured resource cap would be exceeded."""

    exit_code = 2


class UnsupportedError(NilmultError):
    """The request is well-formed but outside what the oracle can do."""
