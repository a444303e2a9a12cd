"""Exception types shared across the package.

The CLI maps these onto its exit codes: usage errors exit 1, degenerate
input exits 2, exhausted resource budgets exit 3.
"""


class FlatImageError(Exception):
    """Base class for all package-specific errors."""


class UsageError(FlatImageError):
    """Bad arguments or malformed input at the interface level."""


class ParseError(UsageError):
    """Syntax error in a polynomial expression.

    `position` is the 0-based character offset where parsing failed.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DegenerateInputError(FlatImageError):
    """The problem instance falls outside the supported regime
    (lower-dimensional image, zero Jacobian ideal, shared factors,
    unbounded cells and similar structural failures)."""


class UnboundedCellError(DegenerateInputError):
    """A sampled point landed in an unbounded cell of the slice
    arrangement, which cannot happen for a compact image; indicates a
    degenerate instance or an inconsistent boundary pair."""


class ResourceBudgetError(FlatImageError):
    """A symbolic computation exceeded its step budget."""
