"""
Exception hierarchy for the hybrid space toolkit.

Every error carries a stable ``code`` (used in validation reports and CLI
messages) and, where it comes from an input file, the 1-based line number.
"""
from typing import Optional


class HybridSpaceError(Exception):
    code = 'HybridSpaceError'

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        if self.line is not None:
            return f'line {self.line}: [{self.code}] {self.message}'
        return f'[{self.code}] {self.message}'


# Input text that cannot be read at all (CLI exit 2)
class InputFormatError(HybridSpaceError):
    code = 'InputFormatError'


class MalformedRow(InputFormatError):
    code = 'MalformedRow'


class BadDate(InputFormatError):
    code = 'BadDate'


# Well-formed input violating a domain rule (CLI exit 1)
class DataValidationError(HybridSpaceError):
    code = 'DataValidationError'


class UnknownPrefix(DataValidationError):
    code = 'UnknownPrefix'


class DuplicateId(DataValidationError):
    code = 'DuplicateId'


class PrefixMismatch(DataValidationError):
    code = 'PrefixMismatch'


class UnknownMedium(DataValidationError):
    code = 'UnknownMedium'


class NegativeCount(DataValidationError):
    code = 'NegativeCount'


class CoordinateOutOfRange(DataValidationError):
    code = 'CoordinateOutOfRange'


class WindowViolation(DataValidationError):
    code = 'WindowViolation'


class RecordWithoutMeasure(DataValidationError):
    code = 'RecordWithoutMeasure'


class DuplicateAnswerId(DataValidationError):
    code = 'DuplicateAnswerId'


class UnknownQuestionCode(DataValidationError):
    code = 'UnknownQuestionCode'


class UnknownOption(DataValidationError):
    code = 'UnknownOption'


class MetricError(HybridSpaceError):
    code = 'MetricError'


class EmptyRegistry(MetricError):
    code = 'EmptyRegistry'


class ZeroRange(MetricError):
    code = 'ZeroRange'


class ZeroParticipants(MetricError):
    code = 'ZeroParticipants'


class CompletersExceedParticipants(MetricError):
    code = 'CompletersExceedParticipants'


class AnalysisError(HybridSpaceError):
    code = 'AnalysisError'


class SegmentTooLarge(AnalysisError):
    code = 'SegmentTooLarge'


class NoWindow(AnalysisError):
    code = 'NoWindow'


class RenderError(HybridSpaceError):
    code = 'RenderError'


class EmptyRanking(RenderError):
    code = 'EmptyRanking'


class EmptySeries(RenderError):
    code = 'EmptySeries'


class ConfigError(HybridSpaceError):
    code = 'ConfigError'


# Lookup used when a validation finding is turned back into an exception
ERRORS_BY_CODE: dict[str, type[HybridSpaceError]] = {
    cls.code: cls
    for cls in (
        MalformedRow, BadDate, UnknownPrefix, DuplicateId, PrefixMismatch,
        UnknownMedium, NegativeCount, CoordinateOutOfRange, WindowViolation,
        RecordWithoutMeasure, DuplicateAnswerId, UnknownQuestionCode, UnknownOption,
    )
}
