"""Exception types shared by all modules."""


class InputError(ValueError):
    """Malformed or ill-typed input (CLI exit status 2)."""


class PreconditionError(InputError):
    """Well-formed input for which an operation's hypotheses fail.

    Still an :class:`InputError`, but the CLI reports it as a negative
    result (exit status 1) rather than as malformed input.
    """


class Unsupported(InputError):
    """The operation is not available for this kind of vertex group."""
