"""Exception hierarchy shared across the engine."""


class CometaError(Exception):
    """Base class for all engine errors."""


class ConfigurationError(CometaError):
    """A config value or resource file is invalid or missing."""


class NotFoundError(CometaError):
    """A referenced corpus, job, or bundle does not exist."""


class CorpusLockedError(CometaError):
    """Another writer holds the corpus lock; safe to retry."""

    retryable = True


class EmptyCorpusError(CometaError):
    """Every document in the input is empty."""


class DegenerateGraphError(CometaError):
    """The graph is too small for the requested measure."""


class StageError(CometaError):
    """A pipeline stage failed; carries the stage name for reporting."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
