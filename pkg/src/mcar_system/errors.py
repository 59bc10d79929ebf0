# -*- coding: utf-8 -*-
"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations

from typing import Optional, Sequence


class MCARError(Exception):
    """Base class for all errors raised by mcar_system."""


class InvalidInputError(MCARError, ValueError):
    """Input data or arguments violate a precondition."""


class CsvParseError(InvalidInputError):
    """A CSV file could not be parsed; carries the offending location."""

    def __init__(self, message: str, row: int, column: Optional[str] = None):
        self.row = row
        self.column = column
        where = f"row {row}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{where}: {message}")


class InsufficientObservedError(InvalidInputError):
    """Fewer observed cases than a statistic needs."""


class AmputationError(InvalidInputError):
    """An amputation request cannot be realized on the given data."""


class TestInapplicableError(MCARError):
    """The requested test cannot be computed on this sample."""

    # keeps pytest from collecting the class
    __test__ = False


class NothingToTestError(TestInapplicableError):
    """No incomplete column exists (q = 0)."""


class OldTestInapplicableError(TestInapplicableError):
    """A_n needs at least one complete column (p >= 1)."""


class DegenerateSampleError(TestInapplicableError):
    """Every singular value of the covariance estimate is zero."""


class SinglePatternError(TestInapplicableError):
    """Little's test needs two or more missingness patterns."""


class NumericalError(MCARError, ArithmeticError):
    """A linear-algebra step failed; `pattern` names the observed columns involved."""

    def __init__(self, message: str, pattern: Optional[Sequence[int]] = None):
        self.pattern = tuple(pattern) if pattern is not None else None
        if self.pattern is not None:
            message = f"{message} (observed columns {list(self.pattern)})"
        super().__init__(message)
