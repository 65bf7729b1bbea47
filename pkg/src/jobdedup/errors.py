"""Exception hierarchy shared across the package."""


class JobDedupError(Exception):
    """Base class for all package errors."""


class ConfigurationError(JobDedupError):
    """Invalid or unusable configuration (empty lexicon, bad paths, ...)."""


class NotFoundError(JobDedupError):
    """A referenced posting or pair does not exist."""


class ScoringUnavailableError(JobDedupError):
    """A score could not be computed (e.g. embedding provider failure)."""


class CacheFingerprintError(ConfigurationError):
    """An embedding cache was opened with a provider it was not built for."""


class EvaluationError(JobDedupError):
    """A labeled pair set could not be evaluated (missing breakdowns)."""
