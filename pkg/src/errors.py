"""
Error types raised by the tree group toolkit.

Every error carries a short ``kind`` string that the CLI reports under
``--json``. None of them derive from ValueError, so they propagate unchanged
out of pydantic validators.
"""

from typing import Optional


class TreeGroupError(Exception):
    """Base class for all domain errors."""

    kind = "error"


class ValidationError(TreeGroupError):
    kind = "validation"


class ExprSyntaxError(TreeGroupError):
    """Malformed word expression, with the offending character position."""

    kind = "syntax"

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class RangeError(TreeGroupError):
    kind = "range"


class UndecidableError(TreeGroupError):
    kind = "undecidable"


class DepthError(TreeGroupError):
    """The sequence ran out of symbols before the requested depth."""

    kind = "depth"


class ExactnessError(TreeGroupError):
    """An exact decision was requested over a sequence without a period."""

    kind = "exactness"


class OrderCapError(TreeGroupError):
    kind = "order_cap"


class ResourceLimitError(TreeGroupError):
    kind = "resource"


class LengthMismatchError(TreeGroupError):
    kind = "length_mismatch"


class LevelMismatchError(TreeGroupError):
    kind = "level_mismatch"


class SizeCapError(TreeGroupError):
    kind = "size_cap"


class DegenerateTruncationError(TreeGroupError):
    kind = "degenerate_truncation"


class MalformedTripleError(TreeGroupError):
    kind = "malformed_triple"


class InconsistentTripleError(TreeGroupError):
    kind = "inconsistent_triple"


class NotInLError(TreeGroupError):
    kind = "not_in_L"


class SearchExhaustedError(TreeGroupError):
    """A bounded search finished without a witness. Not a refutation."""

    kind = "search_exhausted"

    def __init__(self, message: str, bound: int):
        self.bound = bound
        super().__init__(f"{message} (searched up to length {bound})")


class UnrealizableError(TreeGroupError):
    """No witness exists at all; raised only with a proof, never for a search bound."""

    kind = "unrealizable"
