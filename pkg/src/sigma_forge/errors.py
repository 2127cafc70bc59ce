"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain of an operation."""


class ResourceLimitError(RuntimeError):
    """A configured size or time limit was exceeded."""


class FalsificationError(AssertionError):
    """A construction guaranteed by a proved lemma could not be produced.

    Raised instead of returning a partial result; it always indicates a bug
    somewhere in the computation, never a legitimate outcome.
    """
