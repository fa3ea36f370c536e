"""Exception hierarchy shared by every module."""


class SC3Error(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SC3Error, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedError(SC3Error, NotImplementedError):
    """A requested variant is not implemented (e.g. non-Gaussian noise)."""


class InfeasibleAllocationError(SC3Error, ValueError):
    """An allocation violates one of the loop's resource budgets.

    Attributes
    ----------
    constraint : str
        Name of the violated constraint: ``"time"``, ``"bandwidth"``,
        ``"uplink_power"``, ``"downlink_power"`` or ``"cpu_frequency"``.
    """

    def __init__(self, constraint, message):
        super().__init__(f"{constraint} constraint violated: {message}")
        self.constraint = constraint


class NumericalError(SC3Error, ArithmeticError):
    """Base class for numerical failures (CLI exit code 3)."""


class SingularityError(NumericalError):
    """A matrix that must be inverted is singular."""


class ConvergenceError(NumericalError):
    """An iteration did not converge.

    Attributes
    ----------
    residual : float
        Last observed step size or residual.
    iterations : int
    """

    def __init__(self, message, residual, iterations):
        super().__init__(f"{message} (residual={residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class ConfigError(SC3Error, ValueError):
    """Invalid configuration: parse errors, missing keys, bad option values."""

    def __init__(self, message, line=None, key=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.key = key
