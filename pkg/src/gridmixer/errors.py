"""Exception types shared across the package."""

from __future__ import annotations


class GridMixerError(Exception):
    """Base class for all gridmixer errors."""


class DesignError(GridMixerError):
    """A design file or design structure is invalid.

    ``line``/``column`` are set for JSON syntax errors, ``None`` otherwise.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class InvalidDesignError(DesignError):
    """A design failed validation; carries the full report."""

    def __init__(self, report):
        issues = "; ".join(i.message for i in report.errors)
        super().__init__(f"design failed validation: {issues}")
        self.report = report


class NoPathError(GridMixerError):
    """No inlet-to-outlet path exists in the design."""


class SingularSystemError(GridMixerError):
    """The flow linear system could not be solved; indicates a malformed design or a bug."""


class CycleError(GridMixerError):
    """The oriented flow graph contains a cycle; physics forbids this, so it signals a bug."""


class UnclassifiableNodeError(GridMixerError):
    """A node's in/out degree pattern matches no allowed node type; signals a bug."""


class DualOrderError(GridMixerError):
    """The dual order gave an ambiguous or missing verdict for an unrelated edge pair."""


class GenerationFailure(GridMixerError):
    """Random grid generation could not satisfy the constraints within the retry budget."""
