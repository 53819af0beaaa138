"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): bad input
(`InputError`) and a well-formed request that has no answer
(`ComputationError`).
"""


class TwoBoundaryError(Exception):
    """Base class for all package errors."""


class InputError(TwoBoundaryError, ValueError):
    """Invalid arguments, shapes or configuration values."""


class ConfigError(InputError):
    """Syntax or schema error in a key-value config document."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class DegenerateObservableError(InputError):
    """Observable has (numerically) repeated eigenvalues."""


class StateSpaceTooLargeError(InputError):
    """Exact enumeration would exceed the state-step budget."""


class ComputationError(TwoBoundaryError, ArithmeticError):
    """The inputs are valid but the requested quantity does not exist."""


class UndefinedWeakValueError(ComputationError):
    """Pre- and post-selected states are orthogonal."""


class ImpossibleBoundaryError(ComputationError):
    """All ABL numerators vanish, so no outcome is compatible with both boundaries."""


class NoStationaryPointError(ComputationError):
    """The stationary-phase condition has no root in the bracketing interval."""
