"""Exception types shared across the package."""


class PlanforgeError(Exception):
    """Base class for all package errors."""


class InfeasibleProgram(PlanforgeError):
    """A space program cannot be instantiated inside its boundary."""


class InvalidTarget(PlanforgeError):
    """A transformation names a space/opening/storey that does not exist."""


class MalformedWeather(PlanforgeError):
    """Weather text does not follow the EPW layout."""


class MissingConstruction(PlanforgeError):
    """A surface references an unknown construction id."""


class InfeasibleLayout(PlanforgeError):
    """IDF emission requires a layout with zero geometric penalty."""


class UnsupportedCombination(PlanforgeError):
    """Requested systems template combination is not bundled."""


class DuplicateComponent(PlanforgeError):
    """Two components in one branch share an identity tuple."""


class EmitError(PlanforgeError):
    """Layout cannot be compiled into surfaces/subsurfaces."""


class ObjectiveFailure(PlanforgeError):
    """The optimization objective evaluator raised; carries the variable."""

    def __init__(self, message, variable=None):
        super().__init__(message)
        self.variable = variable


class ExecutableNotFound(PlanforgeError):
    """External simulator executable is missing."""


class SimulationTimeout(PlanforgeError):
    """External simulator exceeded its wall-clock budget."""


class SimulationFailed(PlanforgeError):
    """External simulator reported fatal or severe errors."""

    def __init__(self, message, log_excerpt=""):
        super().__init__(message)
        self.log_excerpt = log_excerpt


class MalformedOutput(PlanforgeError):
    """Simulator output text cannot be parsed."""


class BadLength(PlanforgeError):
    """Hourly series does not cover a standard year."""


class IoFailure(PlanforgeError):
    """Filesystem problem while saving or loading a project."""


class FormatVersionMismatch(PlanforgeError):
    """Project file carries an unsupported format_version."""


class SchemaViolation(PlanforgeError):
    """Project file violates the schema; carries the offending field path."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class UnknownProject(PlanforgeError):
    """Service request names a project id that does not exist."""


class UnknownSolution(PlanforgeError):
    """Service request names a solution id that does not exist."""


class UnknownVariable(PlanforgeError):
    """Report request names a variable absent from the solution's outputs."""

    def __init__(self, message, available=()):
        super().__init__(message)
        self.available = list(available)


class InvalidParams(PlanforgeError):
    """Job parameters are invalid for the requested kind."""
