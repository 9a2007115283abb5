"""Exception hierarchy shared across the toolkit.

Every error carries a stable ``code`` token so the CLI and the HTTP
service can map failures to exit codes / response bodies without string
matching.
"""


class TqaError(Exception):
    """Base class for all domain errors raised by tqamark."""

    code = "TqaError"


class UnknownCategory(TqaError):
    code = "UnknownCategory"


class SeverityNotAllowed(TqaError):
    code = "SeverityNotAllowed"


class InvalidSpan(TqaError):
    code = "InvalidSpan"


class OverlapViolation(TqaError):
    code = "OverlapViolation"


class UnknownAnnotation(TqaError):
    code = "UnknownAnnotation"


class InvalidDocument(TqaError):
    code = "InvalidDocument"


class MarkupSyntaxError(TqaError):
    """Raised by the dialect parser; carries every collected diagnostic."""

    code = "MarkupSyntax"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0]
        super().__init__(
            "%d markup error(s); first: %s at offset %d: %s"
            % (len(self.diagnostics), first.kind.value, first.offset, first.message)
        )


class ZeroWords(TqaError):
    code = "ZeroWords"


class EmptyText(TqaError):
    code = "EmptyText"


class UnknownScale(TqaError):
    code = "UnknownScale"


class UnknownRoundingMode(TqaError):
    code = "UnknownRoundingMode"


class UnknownRepresentation(TqaError):
    code = "UnknownRepresentation"


class UnknownRepresentationFields(TqaError):
    code = "UnknownRepresentationFields"


class PathOccupied(TqaError):
    code = "PathOccupied"


class StaleVersion(TqaError):
    code = "StaleVersion"


class DocumentNotFound(TqaError):
    code = "NotFound"


class IoFailure(TqaError):
    code = "IoFailure"


class UnknownCategoryInQuery(TqaError):
    code = "UnknownCategoryInQuery"


class MalformedSegmentFile(TqaError):
    code = "MalformedSegmentFile"


class MissingVariant(TqaError):
    code = "MissingVariant"


class ConfigError(TqaError):
    """Bad or unreadable assessment configuration (environment failure)."""

    code = "ConfigError"


# Errors caused by the caller's data (CLI exit code 1) as opposed to the
# environment the tool runs in (CLI exit code 2).
ENVIRONMENT_ERRORS = (ConfigError, IoFailure, PathOccupied)
