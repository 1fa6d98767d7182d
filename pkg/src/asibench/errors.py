"""Exception types shared across the toolkit."""


class BenchmarkError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(BenchmarkError, ValueError):
    """A parameter is outside its documented range."""


class MetricError(BenchmarkError, ValueError):
    """A metric is undefined for the given input (empty series, zero mean, ...)."""


class RegistryError(BenchmarkError, ValueError):
    """A registry document or condition failed validation."""


class ManifestError(BenchmarkError, ValueError):
    """A corpus manifest is missing, malformed, or fails checksum verification."""


class AdapterError(BenchmarkError):
    """A classifier adapter failed to produce a label."""
