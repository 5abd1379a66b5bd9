"""Exception types shared across the package."""


class OlabError(Exception):
    """Base class for all olab errors."""


class DomainError(OlabError):
    """A point, ball, or grid falls outside the declared domain."""


class ArgumentError(OlabError, ValueError):
    """An argument violates a documented requirement."""


class PreconditionError(OlabError):
    """A mathematical hypothesis of an operation is not met.

    ``payload`` carries the evidence (e.g. the two sides of a violated
    smallness condition, or the failing property report).
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class InvariantError(OlabError):
    """A structural invariant of a domain object is violated."""


class FileFormatError(OlabError):
    """A descriptor / GFN / JMP file could not be parsed."""
