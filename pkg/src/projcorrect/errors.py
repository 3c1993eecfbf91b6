"""Exception types shared across the package.

All derive from ValueError so callers can treat them as precondition
failures; the CLI maps them to exit code 2.
"""


class DegenerateConfigError(ValueError):
    """A geometric construction received a degenerate configuration."""


class EnumerationLimitError(ValueError):
    """An exact operation would require enumerating beyond the supported size."""


class NotSemilinearError(ValueError):
    """A map certified as line-preserving failed semilinear reconstruction."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CorrectionCollisionError(ValueError):
    """The corrected assignment is not injective (outside the guarantee regime).

    Carries the full CorrectionReport and the raw corrected table so callers
    can still account for the attempt.
    """

    def __init__(self, message, report=None, table=None):
        super().__init__(message)
        self.report = report
        self.table = table
