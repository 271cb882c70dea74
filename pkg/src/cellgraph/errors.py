"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: configuration problems exit 1, data
problems exit 2, numerical failures exit 3.
"""

from __future__ import annotations


class CellgraphError(Exception):
    """Base class for all toolkit-specific errors."""


class ConfigError(CellgraphError):
    """Invalid configuration (bad key, bad value, empty stage list, ...)."""


class DataError(CellgraphError):
    """Input data cannot be used (malformed CSV, missing file, ...)."""


class InsufficientDataError(DataError):
    """Series too short for the requested embedding dimension."""


class NumericalError(CellgraphError):
    """A numerical procedure failed or left its validity envelope."""


class RankDeficiencyError(NumericalError):
    """A retained singular value is numerically zero; reduce the rank."""


class InfeasibleRankError(NumericalError):
    """Requested truncation rank exceeds what the data shapes support."""


class StageError(CellgraphError):
    """Wraps a failure inside one campaign stage with its cycle label."""

    def __init__(self, cycle: int, cause: BaseException):
        self.cycle = cycle
        self.cause = cause
        super().__init__(f"stage at cycle {cycle} failed: {cause}")
