"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: ConfigError -> 1 (usage),
DataError and subclasses -> 2 (bad input data), anything else -> 3.
"""


class ToolkitError(Exception):
    """Base class for all handsix errors."""


class ConfigError(ToolkitError):
    """Invalid configuration or parameters (usage error)."""


class DataError(ToolkitError):
    """Input data violates a contract (parse / schema / format)."""


class ParseError(DataError):
    """A structured input file failed to parse or validate."""


class ContainerFormatError(ParseError):
    """A packed six-channel file is malformed."""


class BadMagicError(ContainerFormatError):
    """Packed file does not start with the expected magic bytes."""


class BadVersionError(ContainerFormatError):
    """Packed file or manifest declares an unsupported format version."""


class TruncatedFileError(ContainerFormatError):
    """Packed file is shorter than its header promises."""


class ProjectionError(ToolkitError):
    """Pose cannot be projected (degenerate keypoint set)."""


class MetricError(ToolkitError):
    """Metric is undefined for the given input (empty set, zero norm)."""
