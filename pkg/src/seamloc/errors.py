"""Exception types shared across the package."""


class SeamlocError(Exception):
    """Base class for all package errors."""

    category = "error"


class InvalidParameterError(SeamlocError, ValueError):
    """A configuration value or argument is out of its valid range."""

    category = "invalid-parameter"


class InvalidInputError(SeamlocError, ValueError):
    """Input data is structurally unusable (empty, inconsistent lengths, ...)."""

    category = "invalid-input"


class InvalidScriptError(SeamlocError, ValueError):
    """A walk script cannot be realized (degenerate waypoints, bad cadence)."""

    category = "invalid-script"


class ParseError(SeamlocError, ValueError):
    """A file could not be parsed; carries path and line diagnostics."""

    category = "parse"

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}:" if line is None else f"{path}:{line}:"
        super().__init__(f"{loc} {message}" if loc else message)
        self.path = path
        self.line = line


class InvariantViolation(SeamlocError, ValueError):
    """A loaded value failed a named domain invariant."""

    category = "invariant"

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class FilterDivergenceError(SeamlocError, RuntimeError):
    """Every particle was eliminated; the filter has no support left."""

    category = "filter-divergence"


class UnreliableMeasurementError(SeamlocError, RuntimeError):
    """A sensor reading is too weak to use (e.g. near-zero magnetic field)."""

    category = "unreliable-measurement"


class StateInconsistencyError(SeamlocError, RuntimeError):
    """An event does not match the tracker state it is applied to."""

    category = "state-inconsistency"
