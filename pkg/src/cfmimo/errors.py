"""Exception types shared across the package."""


class CfMimoError(Exception):
    """Base class for all package errors."""


class DimensionError(CfMimoError, ValueError):
    """Matrix/vector dimensions do not conform."""


class InvalidInputError(CfMimoError, ValueError):
    """Input contains NaN/Inf or is otherwise outside the operation's domain."""


class DegenerateInputError(CfMimoError, ValueError):
    """Input is structurally valid but degenerate (e.g. all-zero matrix)."""


class ConditioningError(CfMimoError, ValueError):
    """Matrix is indefinite or too ill-conditioned to repair with a ridge."""


class ConfigurationError(CfMimoError, ValueError):
    """A configuration value violates an invariant."""


class CapacityExceededError(ConfigurationError):
    """More users/groups scheduled than the RF-chain budget can null."""


class ConfigParseError(ConfigurationError):
    """Config text could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SolverError(CfMimoError, RuntimeError):
    """A numerical solver failed to converge or returned an unusable status."""


class RealizationError(CfMimoError, RuntimeError):
    """A designer failed inside the Monte-Carlo loop; names the realization."""
