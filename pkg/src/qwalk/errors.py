"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class QWalkError(Exception):
    """Base class for all errors raised by qwalk."""


class InputError(QWalkError, ValueError):
    """Malformed input: bad vertex indices, unknown generator, unparsable graph file."""


class PreconditionError(QWalkError, ValueError):
    """Input is well formed but violates an operation's hypothesis (e.g. non-regular graph)."""
