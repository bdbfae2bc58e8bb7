"""Exception types shared across the library."""

from __future__ import annotations


class ForcelabError(Exception):
    """Base class for failures the library reports to callers."""


class GraphFormatError(ForcelabError):
    """Malformed graph input (edge-list text, graph6, or JSON payload)."""


class ChronologyError(ForcelabError):
    """A stored forcing schedule violates one of its replay conditions."""

    def __init__(self, message: str, step: int | None = None, force=None):
        super().__init__(message)
        self.step = step
        self.force = force


class WitnessError(ForcelabError):
    """A path-cover witness failed verification."""


class BundleError(ForcelabError):
    """A candidate path bundle was rejected."""


class InfeasibleError(ForcelabError):
    """No feasible set or schedule exists for the requested parameters."""

    def __init__(self, message: str, blue=None):
        super().__init__(message)
        self.blue = blue


class CapExceeded(ForcelabError):
    """Instance is larger than the configured exhaustive-search cap."""


class InvariantViolation(ForcelabError):
    """A property the library guarantees failed to hold; this is a bug,
    not a user error."""
