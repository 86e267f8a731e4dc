"""Exception types shared across the toolkit."""

from __future__ import annotations


class RecurlabError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedOperation(RecurlabError):
    pass


class WordCapError(RecurlabError):
    pass


class HorizonError(RecurlabError):
    """A query needed information outside the region that is known."""


class ParseError(RecurlabError):
    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class PreconditionError(RecurlabError):
    def __init__(self, message, offending=None):
        super().__init__(message if offending is None else f"{message} (offending: {offending!r})")
        self.offending = offending


class StageFailure(RecurlabError):
    """A builder could not complete a stage inside its search bounds."""

    def __init__(self, message, **details):
        super().__init__(f"{message} {details}" if details else message)
        self.details = details
