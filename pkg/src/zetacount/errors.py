"""Exception types shared across the package.

Each class carries the process exit code the command-line front end uses
when the error escapes to the top level.
"""


class ZetaCountError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class InputSyntaxError(ZetaCountError):
    """Malformed user input: polynomial text, rational literals, JSON documents."""

    exit_code = 2


class BudgetExceededError(ZetaCountError):
    """An enumeration or node ceiling was hit before the computation finished."""

    exit_code = 3


class PreconditionError(ZetaCountError):
    """A mathematical precondition does not hold for the given input."""

    exit_code = 4
