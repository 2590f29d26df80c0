"""
Error hierarchy for the comove package.

Every error raised on purpose by the library derives from ComoveError so the
command-line front end can map families onto exit codes.
"""
from typing import Iterable, List, Optional


class ComoveError(Exception):
    """Base exception for all comove errors."""

    exit_code = 1


class ConfigError(ComoveError):
    """Raised when a configuration value or input path is invalid."""

    exit_code = 2

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class ArgumentError(ConfigError, ValueError):
    """Raised when an operation receives arguments outside its contract."""
    pass


class UnsupportedSpecError(ArgumentError):
    """Raised for test configurations outside the supported range."""
    pass


class DataError(ComoveError):
    """Base exception for problems with the input data."""

    exit_code = 3


class ParseError(DataError):
    """Raised when a CSV cell cannot be parsed as a date or number."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class ValidationError(DataError):
    """Raised when parsed data violates a series invariant."""
    pass


class AlignmentError(DataError):
    """Raised when series cannot be matched on a common weekly grid."""

    def __init__(self, message: str, dates: Optional[Iterable] = None):
        super().__init__(message)
        self.dates: List = list(dates or [])


class UnknownColumnError(DataError, KeyError):
    """Raised when a panel column lookup fails."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class SampleSizeError(DataError):
    """Raised when a series is too short for the requested statistic."""
    pass


class NumericalError(ComoveError):
    """Base exception for numerical failures."""

    exit_code = 4


class SingularDesignError(NumericalError):
    """Raised when a regression design matrix is rank deficient."""
    pass


class NumericalRankError(NumericalError):
    """Raised when a moment matrix is singular."""
    pass


class UndefinedStatisticError(NumericalError):
    """Raised when a statistic is undefined for the given input."""
    pass


class ReportCompletenessError(ComoveError):
    """Raised when requested report sections are absent from a bundle."""

    exit_code = 4

    def __init__(self, missing: Iterable[str]):
        self.missing = sorted(missing)
        super().__init__(f"Report bundle is missing sections: {', '.join(self.missing)}")
