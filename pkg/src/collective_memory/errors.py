"""Exception types shared across the collective memory engine."""

from __future__ import annotations


class CollectiveMemoryError(Exception):
    """Base class for all engine errors."""


class EmptyUtteranceError(CollectiveMemoryError):
    """Raised when an utterance is empty or whitespace after normalization."""


class UnknownSessionError(CollectiveMemoryError):
    """Raised when a contribution names a session the graph does not accept."""


class StaleFragmentError(CollectiveMemoryError):
    """Raised when an operation targets an archived fragment."""


class UnknownPlaceError(CollectiveMemoryError):
    """Raised when a caption names a place the gazetteer cannot resolve."""


class NotFoundError(CollectiveMemoryError):
    """Raised when a fragment, contribution, or bundle id does not exist."""


class TickInProgressError(CollectiveMemoryError):
    """Raised when a write arrives while an admin tick holds the graph."""


class DialogueClientError(CollectiveMemoryError):
    """Raised when the dialogue client fails. Carries the bundle id so the
    caller can retry generation against the already-built context bundle."""

    def __init__(self, message: str, bundle_id: str | None = None):
        super().__init__(message)
        self.bundle_id = bundle_id


class PromptFormatError(CollectiveMemoryError):
    """Raised when a rendered prompt does not match the context grammar."""


class CorpusFormatError(CollectiveMemoryError):
    """Raised on a malformed corpus record. Carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
