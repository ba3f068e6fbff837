"""Exception hierarchy shared across the toolkit.

The split mirrors the CLI exit codes: data problems (unreadable or
malformed inputs, misaligned samples) versus model-validity problems
(singular systems, failed identification, no stationary transform).
"""

from __future__ import annotations


class LrsvarError(Exception):
    """Base class for all toolkit errors."""


class DataError(LrsvarError):
    """Input data is missing, malformed, or unusable as given."""


class EstimationError(LrsvarError):
    """A regression system is singular or otherwise cannot be estimated."""


class IdentificationError(LrsvarError):
    """Structural identification failed (instability, non-PD long-run covariance)."""


class StationarityError(LrsvarError):
    """No stationary transform found within the allowed differencing budget."""
