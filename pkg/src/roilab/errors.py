"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: ConfigError -> 2,
DataError (and subclasses) -> 3, anything else -> 4.
"""


class RoilabError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(RoilabError):
    """Invalid or inconsistent run configuration."""


class DataError(RoilabError):
    """Problem with input data (corpus files, curve files, records)."""


class SchemaError(DataError):
    """A file does not match its documented column/field schema."""


class IntegrityError(DataError):
    """Data violates an integrity constraint (duplicate ids, empty ids)."""


class EmptyCorpusError(DataError):
    """A corpus yields no usable labeled pairs."""
