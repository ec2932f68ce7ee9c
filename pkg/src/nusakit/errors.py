"""Exception hierarchy shared across the toolkit."""


class NusakitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(NusakitError):
    """Invalid or incomplete configuration (bad paths, bad values, missing credentials)."""


class DataError(NusakitError):
    """Malformed or inconsistent input data (records, model files, matrices)."""


class TranslationError(NusakitError):
    """A translation request failed after retries."""

    def __init__(self, message: str, sentence_index: int | None = None):
        super().__init__(message)
        self.sentence_index = sentence_index


class JudgeError(NusakitError):
    """A judge request failed after retries."""
