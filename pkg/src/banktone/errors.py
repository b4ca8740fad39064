"""Exception hierarchy shared by all banktone modules.

The CLI maps exception classes to exit codes: 2 for configuration
problems, 3 for bad or missing input data, 4 for numerical failures.
"""


class BanktoneError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 1


class ConfigError(BanktoneError):
    """Invalid run configuration (bad key, missing path, bad flag value)."""

    exit_code = 2


class ParameterError(ConfigError):
    """A numeric parameter is outside its allowed range."""


class LockError(ConfigError):
    """The output directory is locked by another run."""


class DataError(BanktoneError):
    """Input data cannot be used as-is."""

    exit_code = 3


class InputIOError(DataError):
    """A referenced file could not be read."""


class FormatError(DataError):
    """A file's contents violate its expected schema."""


class EmptyCorpusError(DataError):
    """A corpus source yielded zero documents."""


class AlignmentError(DataError):
    """Two series do not share the grid an operation requires."""


class DependencyError(DataError):
    """A stage's upstream artifact is missing."""


class AggregationError(DataError):
    """A document-level aggregate has no inputs to aggregate."""


class InsufficientDataError(DataError):
    """Too few observations for the requested operation."""


class NumericalError(BanktoneError):
    """A numerical procedure cannot produce a valid result."""

    exit_code = 4


class SingularDesignError(NumericalError):
    """The regression design matrix is rank deficient."""


class DegenerateSeriesError(NumericalError):
    """A series has zero variance where spread is required."""
