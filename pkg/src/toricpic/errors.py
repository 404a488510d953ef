"""Exception hierarchy shared across the package."""


class ToricError(Exception):
    """Base class for all package errors."""


class InputError(ToricError):
    """Malformed or out-of-contract input (bad dimensions, invalid fan, ...).

    Maps to exit code 2 in the CLI.
    """


class FanParseError(InputError):
    """Error while parsing a fan document.

    `kind` is "syntax" (unreadable token/structure) or "semantic" (readable
    but meaningless: zero ray, index out of range, missing field).
    """

    def __init__(self, message, line=None, kind="syntax"):
        self.line = line
        self.kind = kind
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{kind} error{where}: {message}")


class HypothesisError(InputError):
    """A mathematical hypothesis of the requested operation is violated
    (fan not complete, divisor not Cartier, fan not smooth, ...)."""


class ConsistencyError(ToricError):
    """An internal double-entry check failed; indicates a bug, never
    bad user input."""
