"""Exception types and the numeric codes used by the foreign interface."""

TL_SUCCESS = 0
TL_ERROR = 1
TL_ALREADY_INITIALIZED = 2
TL_NOT_INITIALIZED = 3
TL_OUTPUT_DIR_UNWRITABLE = 4
TL_UNKNOWN_REGION = 5
TL_UNKNOWN_LOCATION = 6
TL_INVALID_ARGUMENT = 7


class MeasurementError(Exception):
    """Base class for measurement-core failures; `code` crosses the foreign interface."""

    code = TL_ERROR


class AlreadyInitializedError(MeasurementError):
    code = TL_ALREADY_INITIALIZED


class NotInitializedError(MeasurementError):
    code = TL_NOT_INITIALIZED


class OutputDirUnwritableError(MeasurementError):
    code = TL_OUTPUT_DIR_UNWRITABLE


class UnknownRegionError(MeasurementError):
    code = TL_UNKNOWN_REGION


class UnknownLocationError(MeasurementError):
    code = TL_UNKNOWN_LOCATION


class InvalidConfigError(MeasurementError):
    code = TL_INVALID_ARGUMENT


class ParseError(Exception):
    """A trace, profile, or samples file could not be parsed.

    Carries the offending path and, when known, the 1-based line number.
    """

    def __init__(self, path, message, line=None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


class InsufficientDataError(Exception):
    """Not enough distinct data points to fit an overhead model."""
