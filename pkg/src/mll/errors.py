"""Exception types shared across the package."""


class MllError(Exception):
    """Base class for all package-specific errors."""


class ParseError(MllError):
    """Malformed CSV or ARFF input."""


class ConfigError(MllError):
    """Invalid user-supplied configuration (label setup, experiment files)."""


class PreprocessError(MllError):
    """A preprocessing contract was violated (missing column, bad value)."""


class TrainingError(MllError):
    """A learner could not be fitted."""


class PredictionError(MllError):
    """An instance does not conform to the fitted model's feature layout."""


class EvaluationError(MllError):
    """A metric is undefined for the given predictions."""


class StructureError(MllError):
    """A label-dependency structure could not be built."""


class SchemaMismatchError(MllError):
    """A persisted model was applied to data with a different schema."""
